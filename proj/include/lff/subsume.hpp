#pragma once

// Theta-subsumption between clauses and theories, and the three hypothesis
// constraint kinds derived from failed hypotheses.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/outcome.hpp"

namespace lff {

struct Substitution {
  std::map<Var, Var> mapping;

  Literal apply(const Literal& lit) const;
  // Simultaneous replacement; unmapped variables are left unchanged.
  Clause apply(const Clause& c) const;
};

// Some theta with c1.theta a subset of c2 (head onto head, body into body).
std::optional<Substitution> find_subsumption(const Clause& c1, const Clause& c2);
bool clause_subsumes(const Clause& c1, const Clause& c2);
// Every clause of t2 is subsumed by some clause of t1. Empty t2 gives true.
bool theory_subsumes(const Hypothesis& t1, const Hypothesis& t2);

enum class ConstraintKind : std::uint8_t { specialisation, generalisation, redundancy };

std::string_view to_string(ConstraintKind kind);
// Throws Error on an unknown tag.
ConstraintKind parse_constraint_kind(std::string_view tag);

struct Constraint {
  ConstraintKind kind = ConstraintKind::specialisation;
  Hypothesis anchor;    // canonical
  std::uint64_t id = 0;  // content hash of (kind, anchor)

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Canonicalizes the anchor and computes the id.
Constraint make_constraint(ConstraintKind kind, const Hypothesis& anchor);

// Throws Error when the outcome is (complete, consistent).
std::vector<Constraint> derive_constraints(const Hypothesis& h, const Outcome& outcome);

// specialisation(a): theory_subsumes(a, h).
// generalisation(a): theory_subsumes(h, a).
// redundancy(a): h is separable and some nonempty subset of its clauses is
// subsumed by a.
bool violates(const Hypothesis& h, const Constraint& c);

// Wire form: `<kind>\t<anchor clauses on one line, space separated>\t<id as 16 hex digits>`.
// The id is fnv1a("<kind>\n" + to_text(anchor)) so it is stable across runs.
std::string to_wire(const Constraint& c);
// Throws Error on a malformed line or an id that does not match the content.
Constraint from_wire(std::string_view line);

// Compact clause form shared by the matcher and the generator. Predicates are
// identified by symbol id plus arity.
struct FlatLiteral {
  std::uint32_t pred = 0;
  std::uint8_t arity = 0;
  std::array<Var, kMaxArity> args{};

  friend bool operator==(const FlatLiteral&, const FlatLiteral&) = default;
};

FlatLiteral flatten(const Literal& lit);
Literal unflatten(const FlatLiteral& lit);

// Backtracking matcher; the body of the first clause is matched literal by
// literal against per-predicate candidates of the second.
bool flat_subsumes(const FlatLiteral& head1, std::span<const FlatLiteral> body1,
                   const FlatLiteral& head2, std::span<const FlatLiteral> body2);

}  // namespace lff
