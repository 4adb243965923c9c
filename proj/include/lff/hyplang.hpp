#pragma once

// Hypothesis language: definite clauses over variables only, the h_lit/b_lit
// meta-level encoding, canonical forms and the literal-count cost.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lff/symbol.hpp"

namespace lff {

// Variable index; 0 renders as A, 1 as B, ...
using Var = std::uint8_t;

inline constexpr int kMaxArity = 6;
inline constexpr int kMaxVars = 32;

struct PredSig {
  Symbol name;
  int arity = 0;

  friend bool operator==(const PredSig&, const PredSig&) = default;
  friend std::strong_ordering operator<=>(const PredSig& a, const PredSig& b);
};

std::string to_string(const PredSig& p);  // "name/arity"

struct Literal {
  PredSig pred;
  std::vector<Var> args;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Fixed total order on literals: argument index list first, then predicate
// name, then arity. Body literals of a canonical clause are sorted by it.
std::strong_ordering compare(const Literal& a, const Literal& b);

struct Clause {
  Literal head;
  std::vector<Literal> body;

  std::size_t size() const { return 1 + body.size(); }
  bool is_recursive() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// Order of canonical clauses: head, then body sequences lexicographically.
std::strong_ordering compare(const Clause& a, const Clause& b);

struct Hypothesis {
  std::vector<Clause> clauses;

  bool empty() const { return clauses.empty(); }
  // True when no clause body calls a head predicate of the hypothesis.
  bool is_separable() const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

enum class Role : std::uint8_t { head, body };

// One h_lit/b_lit atom: role, clause index, predicate, variable indices.
struct MetaAtom {
  Role role = Role::head;
  std::size_t clause_index = 0;
  PredSig pred;
  std::vector<Var> vars;

  friend bool operator==(const MetaAtom&, const MetaAtom&) = default;
};

struct Bias {
  PredSig head;
  std::vector<PredSig> body_preds;  // the head may appear here; recursion is governed by allow_recursion
  int max_clauses = 1;
  int max_body = 1;
  int max_vars = 1;
  bool allow_recursion = false;

  // Largest hypothesis size the bounds admit.
  int max_size() const { return max_clauses * (1 + max_body); }
  // Predicates that may appear in clause bodies (head included iff recursion is on).
  std::vector<PredSig> callable() const;
};

// Throws InvalidBias on out-of-range bounds or duplicate signatures.
void validate(const Bias& bias);

// Encoding sorted by (clause index, head first, canonical literal order).
std::vector<MetaAtom> encode_hypothesis(const Hypothesis& h);
// Throws MalformedEncoding when a clause index has no head atom, more than one
// head atom, or indices are not contiguous from zero.
Hypothesis decode_hypothesis(std::span<const MetaAtom> atoms);

Clause canonical_clause(const Clause& c);
Hypothesis canonical_form(const Hypothesis& h);
bool is_canonical(const Hypothesis& h);

std::size_t cost(const Hypothesis& h);

// Clause-level bias rules: head has distinct variables, 1..max_body body
// literals over callable predicates, at most max_vars variables, no duplicate
// literal, no body literal equal to the head, every head variable occurs in the
// body, every body variable is connected to a head variable.
bool conforms(const Bias& bias, const Clause& c);
// Hypothesis-level: 1..max_clauses distinct conforming clauses, and a
// recursive clause only alongside at least one non-recursive clause.
bool conforms(const Bias& bias, const Hypothesis& h);

// FNV-1a 64 over a byte string; used for hypothesis and constraint ids.
std::uint64_t fnv1a(std::string_view bytes);
// Content hash of the textual form; callers pass canonical hypotheses.
std::uint64_t hypothesis_id(const Hypothesis& h);
std::string hex_id(std::uint64_t id);

}  // namespace lff
