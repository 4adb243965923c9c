#pragma once

// Independent reference implementations used only by the tests. They favour
// obviousness over speed and share no search code with the library.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/solve.hpp"
#include "lff/tester.hpp"

namespace oracle {

// Tries every mapping from the variables of c1 into the variables of c2.
bool subsumes(const lff::Clause& c1, const lff::Clause& c2);
bool theory_subsumes(const lff::Hypothesis& t1, const lff::Hypothesis& t2);

// Every canonical conforming clause, by enumerating all literal tuples.
std::vector<lff::Clause> clauses(const lff::Bias& bias);
// Every canonical conforming hypothesis of exactly m literals, as text.
std::set<std::string> hypotheses(const lff::Bias& bias, int m);
std::vector<lff::Hypothesis> hypothesis_list(const lff::Bias& bias, int m);

// Every hypothesis of the task's space (sizes 2..max_size) tested one by one;
// the solutions found, cheapest first.
std::vector<lff::Hypothesis> solutions(const lff::TaskSpec& task);
// Cost of the cheapest solution, 0 when there is none.
std::size_t optimum(const lff::TaskSpec& task);

// Least model of B and h by bottom-up fixpoint, restricted to a finite domain:
// every term occurring in the examples or facts, their list suffixes and
// elements, and integers in a small band around those seen. Sound for any
// program; complete for programs whose derivations stay inside the domain.
class Interpreter {
 public:
  Interpreter(const lff::BKProgram& bk, const lff::Hypothesis& h,
              const std::vector<lff::Example>& examples);
  bool holds(const lff::Example& e) const;

 private:
  using Tuple = std::vector<int>;
  int id(const lff::Term& t) const;
  void add_term(const lff::Term& t);
  std::set<Tuple> builtin_tuples(lff::Builtin b) const;

  std::vector<lff::Term> domain_;
  std::map<std::string, int> index_;
  std::map<lff::PredSig, std::set<Tuple>> relations_;
};

}  // namespace oracle
