#include "lff/task.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "lff/error.hpp"
#include "lff/syntax.hpp"

namespace lff {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

long parse_int(std::string_view s, int line, std::string_view what) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, "expected an integer for " + std::string(what) + ", got '" +
                               std::string(s) + "'");
  return v;
}

double parse_seconds(std::string_view s, int line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, "expected seconds, got '" + std::string(s) + "'");
  return v;
}

// Argument of a directive without its terminating '.'.
std::string_view strip_dot(std::string_view rest, int line) {
  rest = trim(rest);
  if (rest.empty() || rest.back() != '.') throw ParseError(line, "directive must end with '.'");
  return trim(rest.substr(0, rest.size() - 1));
}

}  // namespace

TaskSpec parse_task(std::string_view text) {
  TaskSpec t;
  bool have_head = false;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);
    line = trim(line);
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    std::string_view word = line.substr(0, sp);
    std::string_view rest = sp == std::string_view::npos ? std::string_view{} : line.substr(sp);

    if (word == "pos") {
      t.pos.push_back(parse_ground_atom(strip_dot(rest, line_no), line_no));
    } else if (word == "neg") {
      t.neg.push_back(parse_ground_atom(strip_dot(rest, line_no), line_no));
    } else if (word == "fact") {
      t.bk.facts.push_back(parse_ground_atom(strip_dot(rest, line_no), line_no));
    } else if (word == "builtin") {
      auto name = strip_dot(rest, line_no);
      auto b = parse_builtin(name);
      if (!b) throw ParseError(line_no, "unknown builtin '" + std::string(name) + "'");
      t.bk.builtins.insert(*b);
    } else if (word == "relation") {
      t.bk.relations.push_back(parse_pred_sig(strip_dot(rest, line_no), line_no));
    } else if (word == "head") {
      t.bias.head = parse_pred_sig(strip_dot(rest, line_no), line_no);
      have_head = true;
    } else if (word == "body") {
      t.bias.body_preds.push_back(parse_pred_sig(strip_dot(rest, line_no), line_no));
    } else if (word == "max_clauses") {
      t.bias.max_clauses = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "max_body") {
      t.bias.max_body = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "max_vars") {
      t.bias.max_vars = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "recursion") {
      auto v = strip_dot(rest, line_no);
      if (v == "on") t.bias.allow_recursion = true;
      else if (v == "off") t.bias.allow_recursion = false;
      else throw ParseError(line_no, "recursion must be 'on' or 'off'");
    } else if (word == "max_size") {
      t.max_size = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "max_depth") {
      t.limits.max_depth = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "max_steps") {
      t.limits.max_steps = static_cast<int>(parse_int(strip_dot(rest, line_no), line_no, word));
    } else if (word == "timeout") {
      double s = parse_seconds(strip_dot(rest, line_no), line_no);
      t.timeout = std::chrono::milliseconds(static_cast<long long>(s * 1000.0 + 0.5));
    } else if (word == "name") {
      t.name = std::string(strip_dot(rest, line_no));
    } else if (word == "constraint") {
      rest = trim(rest);
      auto sp2 = rest.find_first_of(" \t");
      if (sp2 == std::string_view::npos) throw ParseError(line_no, "constraint needs an anchor");
      ConstraintKind kind;
      try {
        kind = parse_constraint_kind(rest.substr(0, sp2));
      } catch (const Error& e) {
        throw ParseError(line_no, e.what());
      }
      Hypothesis anchor = parse_hypothesis(rest.substr(sp2), line_no);
      if (anchor.empty()) throw ParseError(line_no, "constraint needs an anchor");
      t.initial_constraints.push_back(make_constraint(kind, anchor));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(word) + "'");
    }
  }
  if (!have_head) throw TaskError("task declares no head predicate");
  validate(t);
  return t;
}

TaskSpec load_task(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open task file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  TaskSpec t = parse_task(buf.str());
  if (t.name.empty()) t.name = path.stem().string();
  return t;
}

std::string write_task(const TaskSpec& t) {
  std::ostringstream out;
  if (!t.name.empty()) out << "name " << t.name << ".\n";
  out << "head " << to_string(t.bias.head) << ".\n";
  for (const auto& p : t.bias.body_preds) out << "body " << to_string(p) << ".\n";
  out << "max_clauses " << t.bias.max_clauses << ".\n";
  out << "max_body " << t.bias.max_body << ".\n";
  out << "max_vars " << t.bias.max_vars << ".\n";
  out << "recursion " << (t.bias.allow_recursion ? "on" : "off") << ".\n";
  if (t.max_size > 0) out << "max_size " << t.max_size << ".\n";
  out << "max_depth " << t.limits.max_depth << ".\n";
  out << "max_steps " << t.limits.max_steps << ".\n";
  auto ms = t.timeout.count();
  out << "timeout " << ms / 1000;
  if (ms % 1000) {
    char frac[8];
    std::snprintf(frac, sizeof frac, ".%03lld", static_cast<long long>(ms % 1000));
    out << frac;
  }
  out << ".\n";
  for (Builtin b : t.bk.builtins) out << "builtin " << signature(b).name.str() << ".\n";
  for (const auto& r : t.bk.relations) out << "relation " << to_string(r) << ".\n";
  for (const auto& f : t.bk.facts) out << "fact " << to_text(f) << ".\n";
  for (const auto& e : t.pos) out << "pos " << to_text(e) << ".\n";
  for (const auto& e : t.neg) out << "neg " << to_text(e) << ".\n";
  for (const auto& c : t.initial_constraints) {
    std::string anchor = to_text(c.anchor);
    std::replace(anchor.begin(), anchor.end(), '\n', ' ');
    out << "constraint " << to_string(c.kind) << ' ' << anchor << '\n';
  }
  return out.str();
}

// ---- synthesis tasks ----

namespace {

enum class Synth { find_dupl, sorted, dropk, filter };

Synth synth_of(std::string_view name) {
  if (name == "find_dupl") return Synth::find_dupl;
  if (name == "sorted") return Synth::sorted;
  if (name == "dropk") return Synth::dropk;
  if (name == "filter") return Synth::filter;
  throw TaskError("unknown synthesis task '" + std::string(name) + "'");
}

using Ints = std::vector<int>;

std::optional<Ints> ints_of(const Term& t) {
  if (!t.is_list()) return std::nullopt;
  Ints out;
  for (const auto& x : t.as_list()) {
    if (!x.is_int()) return std::nullopt;
    out.push_back(static_cast<int>(x.as_int()));
  }
  return out;
}

Ints evens(const Ints& xs) {
  Ints out;
  for (int x : xs)
    if (x % 2 == 0) out.push_back(x);
  return out;
}

class Sampler {
 public:
  Sampler(std::uint64_t seed, Synth task) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(task)};
    rng_.seed(seq);
  }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  int element() { return uniform(1, kMaxElement); }
  Ints list(int min_len) {
    Ints xs(static_cast<std::size_t>(uniform(min_len, kMaxListLength)));
    for (int& x : xs) x = element();
    return xs;
  }

 private:
  std::mt19937_64 rng_;
};

PredSig sig(std::string_view name, int arity) { return PredSig{Symbol(name), arity}; }

}  // namespace

const std::vector<std::string>& synthesis_tasks() {
  static const std::vector<std::string> names{"find_dupl", "sorted", "dropk", "filter"};
  return names;
}

bool ground_truth(std::string_view name, const Example& e) {
  Synth s = synth_of(name);
  auto list = e.args.empty() ? std::nullopt : ints_of(e.args[0]);
  if (!list) return false;
  switch (s) {
    case Synth::find_dupl:
      return e.args.size() == 2 && e.args[1].is_int() &&
             std::count(list->begin(), list->end(), e.args[1].as_int()) >= 2;
    case Synth::sorted:
      return e.args.size() == 1 && std::is_sorted(list->begin(), list->end());
    case Synth::dropk: {
      if (e.args.size() != 3 || !e.args[1].is_int()) return false;
      auto k = e.args[1].as_int();
      auto rest = ints_of(e.args[2]);
      if (!rest || k < 0 || k > static_cast<std::int64_t>(list->size())) return false;
      return *rest == Ints(list->begin() + k, list->end());
    }
    case Synth::filter: {
      if (e.args.size() != 2) return false;
      auto out = ints_of(e.args[1]);
      return out && *out == evens(*list);
    }
  }
  return false;
}

Hypothesis reference_solution(std::string_view name) {
  const char* text = "";
  switch (synth_of(name)) {
    case Synth::find_dupl:
      text =
          "f(A,B) :- head(A,B), tail(A,C), element(C,B).\n"
          "f(A,B) :- tail(A,C), f(C,B).";
      break;
    case Synth::sorted:
      text =
          "f(A) :- tail(A,B), empty(B).\n"
          "f(A) :- head(A,B), tail(A,C), head(C,D), geq(D,B), f(C).";
      break;
    case Synth::dropk:
      text =
          "f(A,B,C) :- one(B), tail(A,C).\n"
          "f(A,B,C) :- tail(A,D), decrement(B,E), f(D,E,C).";
      break;
    case Synth::filter:
      text =
          "f(A,B) :- empty(A), empty(B).\n"
          "f(A,B) :- head(A,D), odd(D), tail(A,C), f(C,B).\n"
          "f(A,B) :- tail(A,C), head(A,E), even(E), f(C,D), prepend(E,D,B).";
      break;
  }
  return canonical_form(parse_hypothesis(text));
}

TaskSpec gen_synthesis_task(std::string_view name, std::uint64_t seed) {
  const Synth s = synth_of(name);
  Sampler rng(seed, s);
  TaskSpec t;
  t.name = std::string(name);

  for (Builtin b : {Builtin::head, Builtin::tail, Builtin::element, Builtin::increment,
                    Builtin::decrement, Builtin::geq, Builtin::empty, Builtin::zero, Builtin::one,
                    Builtin::even, Builtin::odd})
    t.bk.builtins.insert(b);
  if (s == Synth::filter) t.bk.builtins.insert(Builtin::prepend);
  for (Builtin b : t.bk.builtins) t.bias.body_preds.push_back(signature(b));
  t.bias.allow_recursion = true;
  t.bias.max_clauses = 2;

  auto atom = [&](std::vector<Term> args) { return GroundAtom{t.bias.head, std::move(args)}; };
  const int n = kSynthesisExamples;

  switch (s) {
    case Synth::find_dupl: {
      t.bias.head = sig("f", 2);
      t.bias.max_body = 3;
      t.bias.max_vars = 3;
      for (int i = 0; i < n; ++i) {
        Ints xs = rng.list(2);
        int a = rng.uniform(0, static_cast<int>(xs.size()) - 1);
        int b = rng.uniform(0, static_cast<int>(xs.size()) - 2);
        if (b >= a) ++b;
        xs[static_cast<std::size_t>(b)] = xs[static_cast<std::size_t>(a)];
        t.pos.push_back(atom({Term::int_list(xs), Term::integer(xs[static_cast<std::size_t>(a)])}));
      }
      for (int i = 0; i < n; ++i) {
        Ints xs = rng.list(2);
        int y = 0;
        do y = rng.element();
        while (std::count(xs.begin(), xs.end(), y) >= 2);
        t.neg.push_back(atom({Term::int_list(xs), Term::integer(y)}));
      }
      break;
    }
    case Synth::sorted: {
      t.bias.head = sig("f", 1);
      t.bias.max_body = 5;
      t.bias.max_vars = 4;
      for (int i = 0; i < n; ++i) {
        Ints xs = rng.list(1);
        std::sort(xs.begin(), xs.end());
        t.pos.push_back(atom({Term::int_list(xs)}));
      }
      for (int i = 0; i < n; ++i) {
        Ints xs;
        do xs = rng.list(2);
        while (std::is_sorted(xs.begin(), xs.end()));
        t.neg.push_back(atom({Term::int_list(xs)}));
      }
      break;
    }
    case Synth::dropk: {
      t.bias.head = sig("f", 3);
      t.bias.max_body = 3;
      t.bias.max_vars = 5;
      std::vector<std::pair<Ints, int>> inputs;
      for (int i = 0; i < 2 * n; ++i) {
        Ints xs = rng.list(1);
        inputs.emplace_back(xs, rng.uniform(1, static_cast<int>(xs.size())));
      }
      for (int i = 0; i < n; ++i) {
        const auto& [xs, k] = inputs[static_cast<std::size_t>(i)];
        t.pos.push_back(atom({Term::int_list(xs), Term::integer(k),
                              Term::int_list(Ints(xs.begin() + k, xs.end()))}));
      }
      for (int i = n; i < 2 * n; ++i) {
        const auto& [xs, k] = inputs[static_cast<std::size_t>(i)];
        int wrong = rng.uniform(0, static_cast<int>(xs.size()) - 1);
        if (wrong >= k) ++wrong;
        t.neg.push_back(atom({Term::int_list(xs), Term::integer(k),
                              Term::int_list(Ints(xs.begin() + wrong, xs.end()))}));
      }
      break;
    }
    case Synth::filter: {
      t.bias.head = sig("f", 2);
      t.bias.max_clauses = 3;
      t.bias.max_body = 5;
      t.bias.max_vars = 5;
      for (int i = 0; i < n; ++i) {
        Ints xs = rng.list(1);
        t.pos.push_back(atom({Term::int_list(xs), Term::int_list(evens(xs))}));
      }
      for (int i = 0; i < n; ++i) {
        Ints xs = rng.list(1);
        Ints out = evens(xs);
        // drop an element, or insert a value that breaks the output
        if (!out.empty() && rng.uniform(0, 1) == 0) {
          out.erase(out.begin() + rng.uniform(0, static_cast<int>(out.size()) - 1));
        } else {
          int at = rng.uniform(0, static_cast<int>(out.size()));
          out.insert(out.begin() + at, rng.element());
        }
        t.neg.push_back(atom({Term::int_list(xs), Term::int_list(out)}));
      }
      break;
    }
  }
  for (const auto& e : t.pos)
    if (!ground_truth(name, e)) throw Error("generated positive fails the target relation");
  for (const auto& e : t.neg)
    if (ground_truth(name, e)) throw Error("generated negative satisfies the target relation");
  validate(t);
  return t;
}

}  // namespace lff
