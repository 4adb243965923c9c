#include "lff/hyplang.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "lff/error.hpp"
#include "lff/syntax.hpp"

namespace lff {

std::strong_ordering operator<=>(const PredSig& a, const PredSig& b) {
  if (auto c = a.name <=> b.name; c != 0) return c;
  return a.arity <=> b.arity;
}

std::string to_string(const PredSig& p) { return p.name.str() + "/" + std::to_string(p.arity); }

std::strong_ordering compare(const Literal& a, const Literal& b) {
  if (auto c = std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                      b.args.end());
      c != 0)
    return c;
  if (a.pred.name != b.pred.name) return a.pred.name <=> b.pred.name;
  return a.pred.arity <=> b.pred.arity;
}

namespace {

bool literal_less(const Literal& a, const Literal& b) { return compare(a, b) < 0; }

std::strong_ordering compare_bodies(const std::vector<Literal>& a, const std::vector<Literal>& b) {
  return std::lexicographical_compare_three_way(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const Literal& x, const Literal& y) { return compare(x, y); });
}

Literal rename(const Literal& lit, const std::map<Var, Var>& mapping) {
  Literal out{lit.pred, {}};
  out.args.reserve(lit.args.size());
  for (Var v : lit.args) out.args.push_back(mapping.at(v));
  return out;
}

}  // namespace

std::strong_ordering compare(const Clause& a, const Clause& b) {
  if (a.head.pred != b.head.pred) return a.head.pred <=> b.head.pred;
  if (auto c = compare(a.head, b.head); c != 0) return c;
  return compare_bodies(a.body, b.body);
}

bool Clause::is_recursive() const {
  return std::any_of(body.begin(), body.end(),
                     [&](const Literal& l) { return l.pred == head.pred; });
}

bool Hypothesis::is_separable() const {
  std::set<PredSig> heads;
  for (const auto& c : clauses) heads.insert(c.head.pred);
  for (const auto& c : clauses)
    for (const auto& l : c.body)
      if (heads.contains(l.pred)) return false;
  return true;
}

std::vector<PredSig> Bias::callable() const {
  std::vector<PredSig> out;
  for (const auto& p : body_preds)
    if (p != head && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  if (allow_recursion) out.push_back(head);
  return out;
}

void validate(const Bias& bias) {
  auto bad = [](const std::string& what) { throw InvalidBias("invalid bias: " + what); };
  if (bias.head.arity < 1 || bias.head.arity > kMaxArity) bad("head arity out of range");
  if (bias.max_clauses < 1) bad("max_clauses must be >= 1");
  if (bias.max_body < 1) bad("max_body must be >= 1");
  if (bias.max_vars < 1 || bias.max_vars > kMaxVars) bad("max_vars out of range");
  if (bias.max_vars < bias.head.arity) bad("max_vars smaller than head arity");
  std::set<PredSig> seen;
  for (const auto& p : bias.body_preds) {
    if (p.arity < 1 || p.arity > kMaxArity) bad("body predicate arity out of range: " + to_string(p));
    if (!seen.insert(p).second) bad("duplicate body predicate " + to_string(p));
  }
}

std::vector<MetaAtom> encode_hypothesis(const Hypothesis& h) {
  std::vector<MetaAtom> atoms;
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    const Clause& c = h.clauses[i];
    atoms.push_back({Role::head, i, c.head.pred, c.head.args});
    for (const auto& l : c.body) atoms.push_back({Role::body, i, l.pred, l.args});
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const MetaAtom& a, const MetaAtom& b) {
    if (a.clause_index != b.clause_index) return a.clause_index < b.clause_index;
    if (a.role != b.role) return a.role == Role::head;
    return compare(Literal{a.pred, a.vars}, Literal{b.pred, b.vars}) < 0;
  });
  return atoms;
}

Hypothesis decode_hypothesis(std::span<const MetaAtom> atoms) {
  std::map<std::size_t, std::vector<const MetaAtom*>> by_clause;
  for (const auto& a : atoms) {
    if (static_cast<int>(a.vars.size()) != a.pred.arity)
      throw MalformedEncoding("meta atom arity does not match its variable tuple");
    by_clause[a.clause_index].push_back(&a);
  }
  Hypothesis h;
  std::size_t expected = 0;
  for (auto& [index, group] : by_clause) {
    if (index != expected)
      throw MalformedEncoding("clause indices are not contiguous: missing " + std::to_string(expected));
    ++expected;
    const MetaAtom* head = nullptr;
    std::vector<Literal> body;
    for (const MetaAtom* a : group) {
      if (a->role == Role::head) {
        if (head) throw MalformedEncoding("clause " + std::to_string(index) + " has two head atoms");
        head = a;
      } else {
        body.push_back({a->pred, a->vars});
      }
    }
    if (!head) throw MalformedEncoding("clause " + std::to_string(index) + " has no head atom");
    std::sort(body.begin(), body.end(), literal_less);
    body.erase(std::unique(body.begin(), body.end()), body.end());
    h.clauses.push_back({{head->pred, head->vars}, std::move(body)});
  }
  return h;
}

Clause canonical_clause(const Clause& c) {
  std::map<Var, Var> mapping;
  Var next = 0;
  for (Var v : c.head.args)
    if (mapping.emplace(v, next).second) ++next;

  std::vector<Var> body_only;
  for (const auto& l : c.body)
    for (Var v : l.args)
      if (!mapping.contains(v) &&
          std::find(body_only.begin(), body_only.end(), v) == body_only.end())
        body_only.push_back(v);

  Clause out{rename(c.head, mapping), {}};
  std::vector<std::size_t> perm(body_only.size());
  std::iota(perm.begin(), perm.end(), 0);
  bool first = true;
  do {
    auto trial = mapping;
    for (std::size_t i = 0; i < body_only.size(); ++i)
      trial[body_only[i]] = static_cast<Var>(next + perm[i]);
    std::vector<Literal> body;
    body.reserve(c.body.size());
    for (const auto& l : c.body) body.push_back(rename(l, trial));
    std::sort(body.begin(), body.end(), literal_less);
    body.erase(std::unique(body.begin(), body.end()), body.end());
    if (first || compare_bodies(body, out.body) < 0) out.body = std::move(body);
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Hypothesis canonical_form(const Hypothesis& h) {
  Hypothesis out;
  out.clauses.reserve(h.clauses.size());
  for (const auto& c : h.clauses) out.clauses.push_back(canonical_clause(c));
  std::sort(out.clauses.begin(), out.clauses.end(),
            [](const Clause& a, const Clause& b) { return compare(a, b) < 0; });
  out.clauses.erase(std::unique(out.clauses.begin(), out.clauses.end()), out.clauses.end());
  return out;
}

bool is_canonical(const Hypothesis& h) { return canonical_form(h) == h; }

std::size_t cost(const Hypothesis& h) {
  std::size_t total = 0;
  for (const auto& c : h.clauses) total += c.size();
  return total;
}

bool conforms(const Bias& bias, const Clause& c) {
  if (c.head.pred != bias.head || c.head.args.size() != static_cast<std::size_t>(bias.head.arity))
    return false;
  if (c.body.empty() || static_cast<int>(c.body.size()) > bias.max_body) return false;

  std::set<Var> head_vars(c.head.args.begin(), c.head.args.end());
  if (head_vars.size() != c.head.args.size()) return false;

  const auto callable = bias.callable();
  std::set<Var> all_vars = head_vars;
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    const Literal& l = c.body[i];
    if (std::find(callable.begin(), callable.end(), l.pred) == callable.end()) return false;
    if (l.args.size() != static_cast<std::size_t>(l.pred.arity)) return false;
    if (l == c.head) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (c.body[j] == l) return false;
    all_vars.insert(l.args.begin(), l.args.end());
  }
  if (static_cast<int>(all_vars.size()) > bias.max_vars) return false;

  std::set<Var> body_vars;
  for (const auto& l : c.body) body_vars.insert(l.args.begin(), l.args.end());
  for (Var v : head_vars)
    if (!body_vars.contains(v)) return false;

  // Grow the component reachable from the head variables through body literals.
  std::set<Var> reached = head_vars;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& l : c.body) {
      bool touches = std::any_of(l.args.begin(), l.args.end(),
                                 [&](Var v) { return reached.contains(v); });
      if (!touches) continue;
      for (Var v : l.args) changed |= reached.insert(v).second;
    }
  }
  return reached.size() == all_vars.size();
}

bool conforms(const Bias& bias, const Hypothesis& h) {
  if (h.clauses.empty() || static_cast<int>(h.clauses.size()) > bias.max_clauses) return false;
  bool any_recursive = false, any_base = false;
  for (std::size_t i = 0; i < h.clauses.size(); ++i) {
    if (!conforms(bias, h.clauses[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (h.clauses[j] == h.clauses[i]) return false;
    (h.clauses[i].is_recursive() ? any_recursive : any_base) = true;
  }
  return !any_recursive || any_base;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t hypothesis_id(const Hypothesis& h) { return fnv1a(to_text(h)); }

std::string hex_id(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

}  // namespace lff
