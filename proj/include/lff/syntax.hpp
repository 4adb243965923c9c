#pragma once

// Textual clause syntax: `head(A,B) :- body1(A,C), body2(C,B).`
// Variables are uppercase identifiers; canonical output names them A, B, C, ...

#include <string>
#include <string_view>

#include "lff/hyplang.hpp"
#include "lff/term.hpp"

namespace lff {

std::string var_name(Var v);
std::string to_text(const Literal& lit);
std::string to_text(const Clause& c);
// One clause per line, no trailing newline.
std::string to_text(const Hypothesis& h);
std::string to_text(const Term& t);
std::string to_text(const GroundAtom& a);

// Parse errors carry `line` when given.
Clause parse_clause(std::string_view text, int line = 0);
// Zero or more clauses, each terminated by '.'.
Hypothesis parse_hypothesis(std::string_view text, int line = 0);
Term parse_term(std::string_view text, int line = 0);
GroundAtom parse_ground_atom(std::string_view text, int line = 0);
// "name/arity"
PredSig parse_pred_sig(std::string_view text, int line = 0);

}  // namespace lff
