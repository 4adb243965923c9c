#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lff/error.hpp"
#include "lff/generate.hpp"
#include "lff/syntax.hpp"
#include "oracle.hpp"

using namespace lff;

namespace {

PredSig sig(const char* name, int arity) { return {Symbol(name), arity}; }

std::vector<std::string> drain(Generator& g) {
  std::vector<std::string> out;
  while (auto h = g.next()) out.push_back(to_text(*h));
  return out;
}

Bias random_bias(std::mt19937& rng) {
  static const PredSig pool[] = {sig("a", 1), sig("b", 1), sig("c", 2), sig("d", 2), sig("e", 3)};
  Bias b;
  b.head = rng() % 2 ? sig("h", 1) : sig("h", 2);
  for (const auto& p : pool)
    if (rng() % 2) b.body_preds.push_back(p);
  if (b.body_preds.empty()) b.body_preds.push_back(pool[2]);
  b.max_clauses = 1 + rng() % 3;
  b.max_body = 1 + rng() % 3;
  b.max_vars = b.head.arity + rng() % 3;
  b.allow_recursion = rng() % 2;
  return b;
}

}  // namespace

TEST_CASE("single candidate slice") {
  Bias b{sig("p", 1), {sig("q", 1)}, 1, 1, 1, false};
  Generator g(b, 2, {}, {});
  auto h = g.next();
  REQUIRE(h);
  CHECK(to_text(*h) == "p(A) :- q(A).");
  CHECK_FALSE(g.next());
  CHECK_FALSE(g.next());

  auto self = make_constraint(ConstraintKind::specialisation, *h);
  Generator pruned(b, 2, std::vector{self}, {});
  CHECK_FALSE(pruned.next());
}

TEST_CASE("size validation") {
  Bias b{sig("p", 1), {sig("q", 1)}, 1, 1, 1, false};
  CHECK_THROWS_AS(Generator(b, 1, {}, {}), InvalidBias);
  CHECK_THROWS_AS(Generator(b, 3, {}, {}), InvalidBias);
  Bias two{sig("p", 1), {sig("q", 1)}, 2, 1, 1, false};
  CHECK(size_reachable(two, 4));
  CHECK_FALSE(size_reachable(two, 3));
}

TEST_CASE("two body predicates") {
  Bias b{sig("p", 1), {sig("q", 1), sig("r", 1)}, 1, 2, 1, false};
  Generator g3(b, 3, {}, {});
  CHECK(drain(g3) == std::vector<std::string>{"p(A) :- q(A), r(A)."});
  Generator g2(b, 2, {}, {});
  CHECK(drain(g2) == std::vector<std::string>{"p(A) :- q(A).", "p(A) :- r(A)."});
}

TEST_CASE("emission set equals brute force on random configurations") {
  std::mt19937 rng(99);
  int checked = 0;
  for (int attempt = 0; attempt < 2000 && checked < 40; ++attempt) {
    Bias b = random_bias(rng);
    int m = 2 + static_cast<int>(rng() % (b.max_size() - 1));
    if (!size_reachable(b, m) || oracle::clauses(b).size() > 150) continue;
    auto want = oracle::hypotheses(b, m);
    if (want.empty() || want.size() > 500) continue;
    ++checked;
    for (std::uint64_t seed : {0, 3}) {
      Generator g(b, m, {}, {seed, seed ? 0.3 : 0.0});
      auto got = drain(g);
      std::set<std::string> uniq(got.begin(), got.end());
      CHECK(uniq.size() == got.size());
      CHECK(uniq == want);
      for (const auto& text : got) {
        auto h = parse_hypothesis(text);
        CHECK(is_canonical(h));
        CHECK(conforms(b, h));
        CHECK(cost(h) == static_cast<std::size_t>(m));
      }
    }
  }
  CHECK(checked == 40);
}

TEST_CASE("pruned set exactness") {
  Bias b{sig("f", 2), {sig("head", 2), sig("tail", 2), sig("empty", 1)}, 2, 2, 3, true};
  std::mt19937 rng(7);
  for (int m : {3, 4, 5}) {
    auto all = oracle::hypothesis_list(b, m);
    REQUIRE(all.size() >= 10);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Constraint> cons;
      for (int i = 0; i < 4; ++i) {
        auto kind = static_cast<ConstraintKind>(rng() % 3);
        auto pick = oracle::hypothesis_list(b, 2 + static_cast<int>(rng() % 3));
        cons.push_back(make_constraint(kind, pick[rng() % pick.size()]));
      }
      std::set<std::string> want;
      for (const auto& h : all)
        if (std::none_of(cons.begin(), cons.end(), [&](const Constraint& c) { return violates(h, c); }))
          want.insert(to_text(h));
      Generator g(b, m, cons, {static_cast<std::uint64_t>(trial), 0.2});
      auto got = drain(g);
      CHECK(std::set<std::string>(got.begin(), got.end()) == want);
      CHECK(got.size() == want.size());
    }
  }
}

TEST_CASE("constraints added mid-enumeration apply to later emissions") {
  Bias b{sig("f", 2), {sig("head", 2), sig("tail", 2), sig("empty", 1)}, 2, 2, 3, true};
  const int m = 5;
  auto all = oracle::hypothesis_list(b, m);
  Generator g(b, m, {}, {});
  std::vector<Hypothesis> seen;
  for (int i = 0; i < 5; ++i) seen.push_back(*g.next());
  auto anchor = parse_hypothesis("f(A,B) :- tail(A,B).");
  auto c = make_constraint(ConstraintKind::specialisation, anchor);
  std::size_t pruned_later = 0;
  std::set<std::string> seen_text;
  for (const auto& h : seen) seen_text.insert(to_text(h));
  for (const auto& h : all)
    if (!seen_text.contains(to_text(h)) && violates(h, c)) ++pruned_later;
  REQUIRE(pruned_later > 0);
  g.add_constraints(std::vector{c});
  g.add_constraints(std::vector{c});
  std::size_t rest = 0;
  while (auto h = g.next()) {
    CHECK_FALSE(violates(*h, c));
    ++rest;
  }
  CHECK(rest == all.size() - seen.size() - pruned_later);
}

TEST_CASE("determinism and seed diversity") {
  Bias b{sig("f", 2), {sig("head", 2), sig("tail", 2), sig("empty", 1), sig("element", 2)}, 2, 2, 3, true};
  const int m = 5;
  auto order = [&](Heuristic h) {
    Generator g(b, m, {}, h);
    return drain(g);
  };
  CHECK(order({4, 0.01}) == order({4, 0.01}));
  auto reference = order({0, 0.0});
  REQUIRE(reference.size() >= 10);
  int differ = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto a = order({s, 0.01});
    auto c = order({s + 10, 0.01});
    CHECK(std::set(a.begin(), a.end()) == std::set(reference.begin(), reference.end()));
    differ += a.front() != c.front();
  }
  CHECK(differ >= 8);
}

TEST_CASE("cancellation") {
  Bias b{sig("f", 2), {sig("head", 2), sig("tail", 2), sig("empty", 1)}, 2, 2, 3, true};
  std::stop_source stop;
  auto index = std::make_shared<ConstraintIndex>(std::make_shared<ClauseSpace>(b));
  Generator g(index, 5, {}, stop.get_token());
  stop.request_stop();
  CHECK_THROWS_AS(while (g.next()) {}, Cancelled);
}
