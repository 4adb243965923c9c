#pragma once

// Bounded SLD evaluation of hypotheses against examples, with list and integer
// builtins and ground-fact background knowledge.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stop_token>
#include <string_view>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/outcome.hpp"
#include "lff/term.hpp"

namespace lff {

enum class Builtin : std::uint8_t {
  head,       // head(L,X): X is the first element of L
  tail,       // tail(L,T)
  element,    // element(L,X): membership
  increment,  // increment(X,Y): Y = X+1
  decrement,  // decrement(X,Y): Y = X-1
  geq,        // geq(X,Y): X >= Y
  empty,      // empty(L): L = []
  zero,
  one,
  even,
  odd,
  prepend,  // prepend(E,L,R): R = [E|L]
};

inline constexpr int kBuiltinCount = 12;

PredSig signature(Builtin b);
std::optional<Builtin> parse_builtin(std::string_view name);

struct BKProgram {
  std::vector<GroundAtom> facts;
  std::set<Builtin> builtins;
  // Fact predicates that may be called even when they have no facts.
  std::vector<PredSig> relations;
};

struct EvalLimits {
  int max_depth = 200;
  int max_steps = 10000;
};

// Throws Error unless both limits are positive.
void validate(const EvalLimits& lim);

enum class Proof : std::uint8_t { proved, not_proved, resource_exhausted };

// Whether B and h derive e. The predicate of e counts as defined even when h has
// no clause for it. Throws UnknownPredicate when a clause of h calls a predicate
// that is neither a builtin, a fact relation, nor defined by h.
Proof entails(const BKProgram& b, const Hypothesis& h, const Example& e, const EvalLimits& lim);

Outcome test_hypothesis(const Hypothesis& h, const BKProgram& b, std::span<const Example> pos,
                        std::span<const Example> neg, const EvalLimits& lim);

// Per-worker evaluator. The background program and the examples are loaded once
// and shared by every hypothesis tested. Not thread-safe; BKProgram may be
// shared between testers.
class Tester {
 public:
  Tester(std::shared_ptr<const BKProgram> bk, std::vector<Example> pos, std::vector<Example> neg,
         EvalLimits lim);
  ~Tester();
  Tester(const Tester&) = delete;
  Tester& operator=(const Tester&) = delete;

  // Throws Cancelled when stop is requested during evaluation.
  Outcome test(const Hypothesis& h, std::stop_token stop = {});
  Proof entails(const Hypothesis& h, const Example& e, std::stop_token stop = {});

  struct Counters {
    std::uint64_t queries = 0;
    std::uint64_t steps = 0;
    std::uint64_t exhausted = 0;
  };
  const Counters& counters() const { return counters_; }

 private:
  class Engine;
  std::unique_ptr<Engine> engine_;
  std::vector<Example> examples_;  // positives first
  std::size_t pos_count_;
  Counters counters_;
};

}  // namespace lff
