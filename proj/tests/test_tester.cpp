#include <doctest.h>

#include <random>

#include "lff/error.hpp"
#include "lff/subsume.hpp"
#include "lff/syntax.hpp"
#include "lff/tester.hpp"
#include "oracle.hpp"

using namespace lff;

namespace {

Hypothesis H(std::string_view text) { return parse_hypothesis(text); }
Example E(std::string_view text) { return parse_ground_atom(text); }

BKProgram list_bk() {
  BKProgram b;
  for (int i = 0; i < kBuiltinCount; ++i) b.builtins.insert(static_cast<Builtin>(i));
  return b;
}

const char* kLast =
    "last(A,B) :- tail(A,C), last(C,B)."
    "last(A,B) :- head(A,B), tail(A,C), empty(C).";

std::vector<Example> examples(std::initializer_list<const char*> texts) {
  std::vector<Example> out;
  for (auto t : texts) out.push_back(E(t));
  return out;
}

}  // namespace

TEST_CASE("fact lookup") {
  BKProgram b;
  b.facts.push_back(E("beats(paper,rock)"));
  CHECK(entails(b, {}, E("beats(paper,rock)"), {}) == Proof::proved);
  CHECK(entails(b, {}, E("beats(rock,paper)"), {}) == Proof::not_proved);
}

TEST_CASE("last/2 by SLD") {
  auto b = list_bk();
  CHECK(entails(b, H(kLast), E("last([4,7,9],9)"), {}) == Proof::proved);
  CHECK(entails(b, H(kLast), E("last([4,7,9],7)"), {}) == Proof::not_proved);
  CHECK(entails(b, H(kLast), E("last([],7)"), {}) == Proof::not_proved);
}

TEST_CASE("outcome classification") {
  auto b = list_bk();
  auto pos = examples({"last([1,2],2)", "last([5],5)"});
  auto neg = examples({"last([1,2],1)"});
  CHECK(test_hypothesis({}, b, pos, neg, {}) ==
        Outcome{Completeness::totally_incomplete, Consistency::consistent});
  CHECK(test_hypothesis(H(kLast), b, pos, neg, {}) == Outcome{});
  CHECK(test_hypothesis(H("last(A,B) :- element(A,B)."), b, pos, neg, {}) ==
        Outcome{Completeness::complete, Consistency::inconsistent});
  CHECK(test_hypothesis(H("last(A,B) :- head(A,B)."), b, pos, neg, {}) ==
        Outcome{Completeness::incomplete, Consistency::inconsistent});
  CHECK_THROWS(test_hypothesis({}, b, {}, neg, {}));
}

TEST_CASE("builtin modes") {
  auto b = list_bk();
  auto proves = [&](const char* h, const char* e) { return entails(b, H(h), E(e), {}) == Proof::proved; };
  CHECK(proves("f(A,B) :- increment(A,B).", "f(3,4)"));
  CHECK(proves("f(A,B) :- decrement(A,B).", "f(3,2)"));
  CHECK_FALSE(proves("f(A,B) :- decrement(A,B).", "f(3,4)"));
  CHECK(proves("f(A,B) :- geq(A,B).", "f(3,3)"));
  CHECK(proves("f(A) :- head(A,B), even(B).", "f([4,1])"));
  CHECK(proves("f(A) :- head(A,B), odd(B).", "f([3])"));
  CHECK(proves("f(A) :- head(A,B), zero(B).", "f([0])"));
  CHECK(proves("f(A) :- head(A,B), one(B).", "f([1,9])"));
  CHECK(proves("f(A,B,C) :- prepend(A,B,C).", "f(1,[2],[1,2])"));
  CHECK_FALSE(proves("f(A,B,C) :- prepend(A,B,C).", "f(1,[2],[2,1])"));
  // prepend decomposes a bound result
  CHECK(proves("f(A,B) :- prepend(C,B,A), one(C).", "f([1,5],[5])"));
  // output built by an unbound literal that must wait for its inputs
  CHECK(proves("f(A,B) :- prepend(C,A,B), head(B,C), one(C).", "f([2],[1,2])"));
  // element enumerates members
  CHECK(proves("f(A) :- element(A,B), even(B).", "f([1,3,8])"));
  CHECK_FALSE(proves("f(A) :- element(A,B), even(B).", "f([1,3,7])"));
  CHECK(proves("f(A,B) :- element(A,C), increment(C,B).", "f([5,9],10)"));
}

TEST_CASE("filter program") {
  auto b = list_bk();
  auto h = H(
      "f(A,B) :- empty(A), empty(B)."
      "f(A,B) :- head(A,D), odd(D), tail(A,C), f(C,B)."
      "f(A,B) :- tail(A,C), head(A,E), even(E), f(C,D), prepend(E,D,B).");
  CHECK(entails(b, h, E("f([1,2,3,4,6],[2,4,6])"), {}) == Proof::proved);
  CHECK(entails(b, h, E("f([1,2,3,4,6],[2,6])"), {}) == Proof::not_proved);
  CHECK(entails(b, h, E("f([],[])"), {}) == Proof::proved);
}

TEST_CASE("resource bounds") {
  auto b = list_bk();
  CHECK(entails(b, H("p(A) :- p(A)."), E("p([1])"), {}) == Proof::resource_exhausted);
  EvalLimits tight{200, 3};
  CHECK(entails(b, H(kLast), E("last([1,2,3,4,5,6],6)"), tight) == Proof::resource_exhausted);
  EvalLimits shallow{2, 100000};
  CHECK(entails(b, H(kLast), E("last([1,2,3,4,5,6],6)"), shallow) == Proof::resource_exhausted);
  CHECK(entails(b, H(kLast), E("last([6],6)"), shallow) == Proof::proved);
  // a negative that only exhausts the budget does not make a hypothesis inconsistent
  auto pos = examples({"p([1])"});
  auto neg = examples({"p([2])"});
  auto o = test_hypothesis(H("p(A) :- p(A). p(A) :- head(A,B), one(B)."), b, pos, neg, {});
  CHECK(o == Outcome{});
  CHECK_THROWS_AS(validate(EvalLimits{0, 1}), Error);
}

TEST_CASE("unknown predicates") {
  BKProgram b;
  b.builtins.insert(Builtin::head);
  CHECK_THROWS_AS(entails(b, H("f(A) :- tail(A,B), head(B,C)."), E("f([1,2])"), {}), UnknownPredicate);
  b.relations.push_back({Symbol("q"), 1});
  CHECK(entails(b, H("f(A) :- q(A)."), E("f(a)"), {}) == Proof::not_proved);
}

TEST_CASE("ground fact background knowledge") {
  BKProgram b;
  for (auto f : {"beats(paper,rock)", "beats(rock,scissors)", "beats(scissors,paper)",
                 "played(t1,paper)", "played(t2,rock)"})
    b.facts.push_back(E(f));
  auto h = H("win(A,B) :- played(A,C), played(B,D), beats(C,D).");
  CHECK(entails(b, h, E("win(t1,t2)"), {}) == Proof::proved);
  CHECK(entails(b, h, E("win(t2,t1)"), {}) == Proof::not_proved);
}

TEST_CASE("soundness and monotonicity against the bottom-up oracle") {
  auto b = list_bk();
  b.builtins = {Builtin::head, Builtin::tail, Builtin::empty, Builtin::element};
  Bias bias{{Symbol("last"), 2}, {{Symbol("head"), 2}, {Symbol("tail"), 2}, {Symbol("empty"), 1}, {Symbol("element"), 2}},
            2, 2, 3, true};
  auto exs = examples({"last([1,2,3],3)", "last([1,2,3],2)", "last([4],4)", "last([5,6],5)",
                       "last([2,2],2)", "last([7,8,9,1],1)", "last([],1)", "last([3,1],4)"});
  std::vector<Hypothesis> hs;
  for (int m = 2; m <= 6; ++m)
    for (auto& h : oracle::hypothesis_list(bias, m)) hs.push_back(std::move(h));
  REQUIRE(hs.size() > 1000);

  std::vector<std::vector<Proof>> proofs;
  Tester t(std::make_shared<const BKProgram>(b), exs, {}, {});
  std::size_t proved = 0, exhausted = 0;
  for (const auto& h : hs) {
    oracle::Interpreter model(b, h, exs);
    auto& row = proofs.emplace_back();
    for (const auto& e : exs) {
      Proof p = t.entails(h, e);
      row.push_back(p);
      if (p == Proof::proved) {
        ++proved;
        CHECK(model.holds(e));
      }
      exhausted += p == Proof::resource_exhausted;
      // non-recursive programs only use terms of the domain, so the oracle is exact there
      if (h.is_separable() && p != Proof::resource_exhausted) CHECK((p == Proof::proved) == model.holds(e));
    }
  }
  CHECK(proved > 1000);

  std::mt19937 rng(3);
  int pairs = 0;
  for (int trial = 0; trial < 200000 && pairs < 2000; ++trial) {
    std::size_t i = rng() % hs.size(), j = rng() % hs.size();
    if (!theory_subsumes(hs[i], hs[j])) continue;
    ++pairs;
    for (std::size_t k = 0; k < exs.size(); ++k) {
      if (proofs[i][k] == Proof::resource_exhausted || proofs[j][k] == Proof::resource_exhausted) continue;
      if (proofs[j][k] == Proof::proved) CHECK(proofs[i][k] == Proof::proved);
    }
  }
  CHECK(pairs >= 200);
  MESSAGE("hypotheses " << hs.size() << ", subsuming pairs " << pairs << ", exhausted " << exhausted);
}

TEST_CASE("determinism and cancellation") {
  auto b = std::make_shared<const BKProgram>(list_bk());
  auto pos = examples({"last([1,2],2)", "last([5],5)"});
  auto neg = examples({"last([1,2],1)"});
  Tester t1(b, pos, neg, {}), t2(b, pos, neg, {});
  for (auto text : {kLast, "last(A,B) :- element(A,B).", "last(A,B) :- head(A,B)."})
    CHECK(t1.test(H(text)) == t2.test(H(text)));
  std::stop_source stop;
  stop.request_stop();
  Tester slow(b, examples({"p([1])"}), {}, {200, 100000});
  CHECK_THROWS_AS(slow.test(H("p(A) :- p(A)."), stop.get_token()), Cancelled);
}
