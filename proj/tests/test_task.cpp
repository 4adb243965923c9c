#include <doctest.h>

#include <algorithm>

#include "lff/error.hpp"
#include "lff/syntax.hpp"
#include "lff/task.hpp"

using namespace lff;

namespace {

const char* kSmall =
    "% tiny task\n"
    "head p/1.\n"
    "body q/1.\n"
    "fact q(a).   % trailing comment\n"
    "pos p(a).\n";

std::vector<int> ints(const Term& t) {
  std::vector<int> out;
  for (const auto& x : t.as_list()) out.push_back(static_cast<int>(x.as_int()));
  return out;
}

int line_of(std::string_view text) {
  try {
    parse_task(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("task file parsing") {
  TaskSpec t = parse_task(kSmall);
  CHECK(t.pos.size() == 1);
  CHECK(t.neg.empty());
  CHECK(t.bk.facts.size() == 1);
  CHECK(to_string(t.bias.head) == "p/1");
  CHECK(t.bias.body_preds.size() == 1);
  CHECK(t.limits.max_steps == EvalLimits{}.max_steps);
  CHECK(t.timeout == std::chrono::milliseconds(300000));

  TaskSpec u = parse_task(
      "name demo.\nhead last/2.\nbody tail/2.\nbody head/2.\nbuiltin tail.\nbuiltin head.\n"
      "max_clauses 2.\nmax_body 3.\nmax_vars 4.\nrecursion on.\nmax_size 7.\nmax_depth 50.\n"
      "max_steps 999.\ntimeout 2.5.\nrelation score/3.\npos last([4,7,9],9).\nneg last([4,7,9],7).\n"
      "constraint specialisation last(A,B) :- head(A,B).\n");
  CHECK(u.name == "demo");
  CHECK(u.bias.max_clauses == 2);
  CHECK(u.bias.max_vars == 4);
  CHECK(u.bias.allow_recursion);
  CHECK(u.max_size == 7);
  CHECK(u.limits.max_depth == 50);
  CHECK(u.limits.max_steps == 999);
  CHECK(u.timeout == std::chrono::milliseconds(2500));
  CHECK(u.bk.builtins.size() == 2);
  CHECK(u.bk.relations.size() == 1);
  REQUIRE(u.initial_constraints.size() == 1);
  CHECK(u.initial_constraints[0].kind == ConstraintKind::specialisation);
  CHECK(parse_task(write_task(u)).initial_constraints == u.initial_constraints);
}

TEST_CASE("task file errors") {
  CHECK_THROWS_AS(parse_task("head p/1.\nbody q/1.\nfact q(a).\n"), TaskError);
  CHECK_THROWS_AS(parse_task("head p/1.\nbody q/1.\nfact q(a).\npos r(a).\n"), TaskError);
  CHECK_THROWS_AS(parse_task("body q/1.\nfact q(a).\npos p(a).\n"), TaskError);
  CHECK(line_of("head p/1.\n\nfrobnicate.\npos p(a).\n") == 3);
  CHECK(line_of("head p/1.\npos p(a)\n") == 2);
  CHECK(line_of("head p/1.\nmax_body x.\n") == 2);
  CHECK(line_of("head p/1.\nbuiltin nope.\n") == 2);
  CHECK(line_of("head p/1.\nrecursion maybe.\n") == 2);
  CHECK(line_of("head p/1.\nconstraint sideways p(A) :- q(A).\n") == 2);
  CHECK(line_of("head p/1.\npos p([1,2.\n") == 2);
  CHECK_THROWS_AS(load_task("/nonexistent/file.task"), Error);
}

TEST_CASE("write_task round trip") {
  TaskSpec t = parse_task(kSmall);
  std::string text = write_task(t);
  TaskSpec back = parse_task(text);
  CHECK(write_task(back) == text);
  CHECK(back.pos == t.pos);
  CHECK(back.bk.facts == t.bk.facts);
  for (const auto& name : synthesis_tasks()) {
    TaskSpec g = gen_synthesis_task(name, 3);
    TaskSpec r = parse_task(write_task(g));
    CHECK(r.pos == g.pos);
    CHECK(r.neg == g.neg);
    CHECK(r.bias.head == g.bias.head);
    CHECK(r.bias.body_preds == g.bias.body_preds);
    CHECK(r.bk.builtins == g.bk.builtins);
    CHECK(write_task(r) == write_task(g));
  }
}

TEST_CASE("generated synthesis tasks follow the protocol") {
  for (const auto& name : synthesis_tasks()) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      CAPTURE(name);
      CAPTURE(seed);
      TaskSpec t = gen_synthesis_task(name, seed);
      CHECK(t.pos.size() == 10);
      CHECK(t.neg.size() == 10);
      for (const auto* set : {&t.pos, &t.neg})
        for (const auto& e : *set)
          for (const auto& arg : e.args)
            if (arg.is_list()) {
              CHECK(arg.as_list().size() <= 50);
              for (int x : ints(arg)) {
                CHECK(x >= 1);
                CHECK(x <= 100);
              }
            }
      CHECK(t.bk.builtins.size() == (name == "filter" ? 12u : 11u));
      CHECK(t.bk.builtins.contains(Builtin::prepend) == (name == "filter"));
      // the hand-written target separates the examples
      CHECK(test_hypothesis(reference_solution(name), t.bk, t.pos, t.neg, t.limits).is_solution());
    }
  }
}

TEST_CASE("generated labels agree with direct checks") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TaskSpec f = gen_synthesis_task("filter", seed);
    for (const auto& e : f.pos) {
      std::vector<int> evens;
      for (int x : ints(e.args[0]))
        if (x % 2 == 0) evens.push_back(x);
      CHECK(ints(e.args[1]) == evens);
    }
    for (const auto& e : f.neg) {
      std::vector<int> evens;
      for (int x : ints(e.args[0]))
        if (x % 2 == 0) evens.push_back(x);
      CHECK(ints(e.args[1]) != evens);
    }
    TaskSpec s = gen_synthesis_task("sorted", seed);
    for (const auto& e : s.pos) {
      auto xs = ints(e.args[0]);
      CHECK(std::is_sorted(xs.begin(), xs.end()));
    }
    for (const auto& e : s.neg) {
      auto xs = ints(e.args[0]);
      CHECK_FALSE(std::is_sorted(xs.begin(), xs.end()));
    }
    TaskSpec d = gen_synthesis_task("find_dupl", seed);
    for (const auto& e : d.pos) {
      auto xs = ints(e.args[0]);
      CHECK(std::count(xs.begin(), xs.end(), e.args[1].as_int()) >= 2);
    }
    for (const auto& e : d.neg) {
      auto xs = ints(e.args[0]);
      CHECK(std::count(xs.begin(), xs.end(), e.args[1].as_int()) < 2);
    }
    TaskSpec k = gen_synthesis_task("dropk", seed);
    for (const auto& e : k.pos) {
      auto xs = ints(e.args[0]);
      auto n = e.args[1].as_int();
      CHECK(ints(e.args[2]) == std::vector<int>(xs.begin() + n, xs.end()));
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  for (const auto& name : synthesis_tasks()) {
    CHECK(write_task(gen_synthesis_task(name, 11)) == write_task(gen_synthesis_task(name, 11)));
    CHECK(write_task(gen_synthesis_task(name, 11)) != write_task(gen_synthesis_task(name, 12)));
  }
  CHECK_THROWS_AS(gen_synthesis_task("reverse", 0), TaskError);
  CHECK_THROWS_AS(reference_solution("reverse"), TaskError);
}

TEST_CASE("reference programs") {
  CHECK(cost(reference_solution("filter")) == 14);
  CHECK(cost(reference_solution("find_dupl")) == 7);
  for (const auto& name : synthesis_tasks()) {
    TaskSpec t = gen_synthesis_task(name, 0);
    CHECK(conforms(t.bias, reference_solution(name)));
  }
}
