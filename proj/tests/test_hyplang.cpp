#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lff/error.hpp"
#include "lff/hyplang.hpp"
#include "lff/syntax.hpp"
#include "oracle.hpp"

using namespace lff;

namespace {

Hypothesis H(std::string_view text) { return parse_hypothesis(text); }

PredSig sig(const char* name, int arity) { return {Symbol(name), arity}; }

MetaAtom atom(Role role, std::size_t idx, const char* name, std::vector<Var> vars) {
  return {role, idx, sig(name, static_cast<int>(vars.size())), std::move(vars)};
}

}  // namespace

TEST_CASE("encode last/2 clause") {
  auto h = canonical_form(H("last(A,B) :- tail(A,C), head(C,B)."));
  std::vector<MetaAtom> want = {atom(Role::head, 0, "last", {0, 1}),
                                atom(Role::body, 0, "tail", {0, 2}),
                                atom(Role::body, 0, "head", {2, 1})};
  CHECK(encode_hypothesis(h) == want);
  CHECK(encode_hypothesis(Hypothesis{}).empty());
}

TEST_CASE("encode two clause program in canonical order") {
  auto h = canonical_form(H("p(A) :- r(A). p(A) :- q(A)."));
  std::vector<MetaAtom> want = {atom(Role::head, 0, "p", {0}), atom(Role::body, 0, "q", {0}),
                                atom(Role::head, 1, "p", {0}), atom(Role::body, 1, "r", {0})};
  CHECK(encode_hypothesis(h) == want);
}

TEST_CASE("decode") {
  std::vector<MetaAtom> atoms = {atom(Role::head, 0, "last", {0, 1}),
                                 atom(Role::body, 0, "last", {1, 0})};
  CHECK(to_text(decode_hypothesis(atoms)) == "last(A,B) :- last(B,A).");

  std::vector<MetaAtom> headless = {atom(Role::body, 0, "q", {0})};
  CHECK_THROWS_AS(decode_hypothesis(headless), MalformedEncoding);
  std::vector<MetaAtom> two_heads = {atom(Role::head, 0, "p", {0}), atom(Role::head, 0, "p", {0}),
                                     atom(Role::body, 0, "q", {0})};
  CHECK_THROWS_AS(decode_hypothesis(two_heads), MalformedEncoding);
  std::vector<MetaAtom> gap = {atom(Role::head, 1, "p", {0}), atom(Role::body, 1, "q", {0})};
  CHECK_THROWS_AS(decode_hypothesis(gap), MalformedEncoding);
}

TEST_CASE("canonical form") {
  CHECK(to_text(canonical_form(H("last(X,Y) :- head(Z,Y), tail(X,Z)."))) ==
        "last(A,B) :- tail(A,C), head(C,B).");
  auto a = H("p(A) :- q(A). p(A) :- r(A).");
  auto b = H("p(X) :- r(X). p(Y) :- q(Y).");
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(is_canonical(canonical_form(a)));
  // duplicate clauses collapse
  CHECK(canonical_form(H("p(A) :- q(A). p(B) :- q(B).")).clauses.size() == 1);
}

TEST_CASE("cost") {
  CHECK(cost(Hypothesis{}) == 0);
  CHECK(cost(H("p(A) :- q(A).")) == 2);
  auto filter = H(
      "f(A,B) :- empty(A), empty(B)."
      "f(A,B) :- head(A,D), odd(D), tail(A,C), f(C,B)."
      "f(A,B) :- tail(A,C), head(A,E), even(E), f(C,D), prepend(E,D,B).");
  CHECK(cost(filter) == 14);
}

TEST_CASE("conformance rules") {
  Bias b{sig("p", 2), {sig("q", 2), sig("r", 1)}, 2, 3, 3, false};
  CHECK(conforms(b, parse_clause("p(A,B) :- q(A,B).")));
  CHECK_FALSE(conforms(b, parse_clause("p(A,B) :- q(A,C).")));             // B absent from body
  CHECK_FALSE(conforms(b, parse_clause("p(A,B) :- q(A,B), r(C).")));       // C disconnected
  CHECK_FALSE(conforms(b, parse_clause("p(A,A) :- q(A,A).")));             // repeated head var
  CHECK_FALSE(conforms(b, parse_clause("p(A,B) :- q(A,B), p(B,A).")));     // recursion off
  CHECK_FALSE(conforms(b, parse_clause("p(A,B) :- q(A,C), q(C,D), q(D,B).")));  // 4 vars
  b.allow_recursion = true;
  CHECK(conforms(b, parse_clause("p(A,B) :- q(A,B), p(B,A).")));
  CHECK_FALSE(conforms(b, parse_clause("p(A,B) :- q(A,B), p(A,B).")));     // body repeats head
  CHECK_FALSE(conforms(b, H("p(A,B) :- q(A,C), p(C,B).")));                // no base clause
  CHECK(conforms(b, H("p(A,B) :- q(A,B). p(A,B) :- q(A,C), p(C,B).")));
}

TEST_CASE("bias validation") {
  Bias b{sig("p", 2), {sig("q", 2)}, 1, 1, 2, false};
  CHECK_NOTHROW(validate(b));
  auto bad = b;
  bad.max_vars = 1;
  CHECK_THROWS_AS(validate(bad), InvalidBias);
  bad = b;
  bad.body_preds.push_back(sig("q", 2));
  CHECK_THROWS_AS(validate(bad), InvalidBias);
  bad = b;
  bad.max_body = 0;
  CHECK_THROWS_AS(validate(bad), InvalidBias);
}

TEST_CASE("properties over random hypotheses") {
  Bias b{sig("f", 2), {sig("head", 2), sig("tail", 2), sig("empty", 1)}, 2, 3, 4, true};
  std::mt19937 rng(11);
  auto all = oracle::hypothesis_list(b, 6);
  REQUIRE(all.size() > 100);
  for (int trial = 0; trial < 300; ++trial) {
    const Hypothesis& h = all[rng() % all.size()];
    CHECK(is_canonical(h));
    CHECK(decode_hypothesis(encode_hypothesis(h)) == h);
    CHECK(canonical_form(canonical_form(h)) == canonical_form(h));

    // rename variables with a random bijection and shuffle bodies and clauses
    Hypothesis g = h;
    std::vector<Var> perm(8);
    std::iota(perm.begin(), perm.end(), Var{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& c : g.clauses) {
      for (auto& v : c.head.args) v = perm[v];
      for (auto& l : c.body)
        for (auto& v : l.args) v = perm[v];
      std::shuffle(c.body.begin(), c.body.end(), rng);
    }
    std::shuffle(g.clauses.begin(), g.clauses.end(), rng);
    CHECK(canonical_form(g) == h);

    const Hypothesis& k = all[rng() % all.size()];
    Hypothesis u = h;
    u.clauses.insert(u.clauses.end(), k.clauses.begin(), k.clauses.end());
    auto cu = cost(canonical_form(u));
    CHECK(cu <= cost(h) + cost(k));
    bool disjoint = std::none_of(h.clauses.begin(), h.clauses.end(), [&](const Clause& c) {
      return std::find(k.clauses.begin(), k.clauses.end(), c) != k.clauses.end();
    });
    if (disjoint) CHECK(cu == cost(h) + cost(k));
  }
}

TEST_CASE("canonical variables follow first occurrence") {
  Bias b{sig("f", 2), {sig("q", 2), sig("r", 3)}, 1, 3, 5, false};
  for (const auto& c : oracle::clauses(b)) {
    int next = 0;
    auto visit = [&](Var v) {
      if (v == next) ++next;
      CHECK(v < next);
    };
    for (Var v : c.head.args) visit(v);
    for (const auto& l : c.body)
      for (Var v : l.args) visit(v);
  }
}

TEST_CASE("text round trip") {
  auto h = H("f(A,B) :- tail(A,C), f(C,B).\nf(A,B) :- head(A,B).");
  CHECK(to_text(parse_hypothesis(to_text(h))) == to_text(h));
  CHECK_THROWS_AS(parse_clause("p(A) :- q(a)."), ParseError);
  CHECK(to_text(parse_ground_atom("last([4,7,9],9).")) == "last([4,7,9],9)");
  CHECK(to_string(parse_pred_sig("head/2")) == "head/2");
}
