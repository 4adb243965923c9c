#include "lff/subsume.hpp"

#include <algorithm>

#include "lff/error.hpp"
#include "lff/syntax.hpp"

namespace lff {

std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::complete: return "complete";
    case Completeness::incomplete: return "incomplete";
    case Completeness::totally_incomplete: return "totally_incomplete";
  }
  return "?";
}

std::string to_string(Consistency c) {
  return c == Consistency::consistent ? "consistent" : "inconsistent";
}

std::string to_string(const Outcome& o) {
  return to_string(o.completeness) + "/" + to_string(o.consistency);
}

Literal Substitution::apply(const Literal& lit) const {
  Literal out = lit;
  for (Var& v : out.args)
    if (auto it = mapping.find(v); it != mapping.end()) v = it->second;
  return out;
}

Clause Substitution::apply(const Clause& c) const {
  Clause out{apply(c.head), {}};
  for (const auto& l : c.body) out.body.push_back(apply(l));
  return out;
}

FlatLiteral flatten(const Literal& lit) {
  if (lit.args.size() > static_cast<std::size_t>(kMaxArity))
    throw Error("literal arity exceeds " + std::to_string(kMaxArity));
  FlatLiteral out;
  out.pred = lit.pred.name.id();
  out.arity = static_cast<std::uint8_t>(lit.args.size());
  std::copy(lit.args.begin(), lit.args.end(), out.args.begin());
  return out;
}

namespace {

struct Matcher {
  std::array<std::int16_t, 256> theta;
  std::vector<Var> trail;
  std::vector<std::vector<std::uint32_t>> candidates;
  std::vector<std::uint32_t> order;
  std::span<const FlatLiteral> body1, body2;

  Matcher() { theta.fill(-1); }

  bool bind(const FlatLiteral& a, const FlatLiteral& b) {
    for (int i = 0; i < a.arity; ++i) {
      Var v = a.args[i];
      if (theta[v] < 0) {
        theta[v] = b.args[i];
        trail.push_back(v);
      } else if (theta[v] != b.args[i]) {
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      theta[trail.back()] = -1;
      trail.pop_back();
    }
  }

  bool search(std::size_t k) {
    if (k == order.size()) return true;
    const FlatLiteral& lit = body1[order[k]];
    for (std::uint32_t cand : candidates[order[k]]) {
      std::size_t mark = trail.size();
      if (bind(lit, body2[cand]) && search(k + 1)) return true;
      undo(mark);
    }
    return false;
  }

  // On success the bindings stay in theta until reset() is called.
  bool run(const FlatLiteral& head1, std::span<const FlatLiteral> b1, const FlatLiteral& head2,
           std::span<const FlatLiteral> b2) {
    if (head1.pred != head2.pred || head1.arity != head2.arity) return false;
    body1 = b1;
    body2 = b2;
    if (candidates.size() < b1.size()) candidates.resize(b1.size());
    order.clear();
    for (std::uint32_t i = 0; i < b1.size(); ++i) {
      auto& cands = candidates[i];
      cands.clear();
      for (std::uint32_t j = 0; j < b2.size(); ++j)
        if (b2[j].pred == b1[i].pred && b2[j].arity == b1[i].arity) cands.push_back(j);
      if (cands.empty()) return false;
      // fewest candidates first; insertion keeps ties in body order
      std::size_t at = order.size();
      order.push_back(i);
      while (at > 0 && candidates[order[at - 1]].size() > cands.size()) {
        order[at] = order[at - 1];
        --at;
      }
      order[at] = i;
    }
    std::size_t mark = trail.size();
    if (!bind(head1, head2)) {
      undo(mark);
      return false;
    }
    return search(0);
  }

  void reset() { undo(0); }
};

Matcher& matcher() {
  thread_local Matcher m;
  return m;
}

struct FlatClause {
  FlatLiteral head;
  std::vector<FlatLiteral> body;
};

FlatClause flatten(const Clause& c) {
  FlatClause out{lff::flatten(c.head), {}};
  out.body.reserve(c.body.size());
  for (const auto& l : c.body) out.body.push_back(lff::flatten(l));
  return out;
}

std::vector<FlatClause> flatten(const Hypothesis& h) {
  std::vector<FlatClause> out;
  out.reserve(h.clauses.size());
  for (const auto& c : h.clauses) out.push_back(flatten(c));
  return out;
}

bool subsumes(const FlatClause& a, const FlatClause& b) {
  return flat_subsumes(a.head, a.body, b.head, b.body);
}

bool theory_subsumes(const std::vector<FlatClause>& t1, const std::vector<FlatClause>& t2) {
  return std::all_of(t2.begin(), t2.end(), [&](const FlatClause& c2) {
    return std::any_of(t1.begin(), t1.end(), [&](const FlatClause& c1) { return subsumes(c1, c2); });
  });
}

}  // namespace

bool flat_subsumes(const FlatLiteral& head1, std::span<const FlatLiteral> body1,
                   const FlatLiteral& head2, std::span<const FlatLiteral> body2) {
  Matcher& m = matcher();
  bool ok = m.run(head1, body1, head2, body2);
  m.reset();
  return ok;
}

std::optional<Substitution> find_subsumption(const Clause& c1, const Clause& c2) {
  FlatClause a = flatten(c1), b = flatten(c2);
  Matcher& m = matcher();
  std::optional<Substitution> out;
  if (m.run(a.head, a.body, b.head, b.body)) {
    out.emplace();
    for (Var v : m.trail) out->mapping[v] = static_cast<Var>(m.theta[v]);
  }
  m.reset();
  return out;
}

bool clause_subsumes(const Clause& c1, const Clause& c2) {
  return subsumes(flatten(c1), flatten(c2));
}

bool theory_subsumes(const Hypothesis& t1, const Hypothesis& t2) {
  return theory_subsumes(flatten(t1), flatten(t2));
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::specialisation: return "specialisation";
    case ConstraintKind::generalisation: return "generalisation";
    case ConstraintKind::redundancy: return "redundancy";
  }
  return "?";
}

ConstraintKind parse_constraint_kind(std::string_view tag) {
  if (tag == "specialisation") return ConstraintKind::specialisation;
  if (tag == "generalisation") return ConstraintKind::generalisation;
  if (tag == "redundancy") return ConstraintKind::redundancy;
  throw Error("unknown constraint kind '" + std::string(tag) + "'");
}

Constraint make_constraint(ConstraintKind kind, const Hypothesis& anchor) {
  Constraint c{kind, canonical_form(anchor), 0};
  std::string content(to_string(kind));
  content += '\n';
  content += to_text(c.anchor);
  c.id = fnv1a(content);
  return c;
}

std::vector<Constraint> derive_constraints(const Hypothesis& h, const Outcome& outcome) {
  if (outcome.is_solution())
    throw Error("no constraint can be derived from a complete and consistent hypothesis");
  std::vector<Constraint> out;
  if (outcome.is_incomplete()) out.push_back(make_constraint(ConstraintKind::specialisation, h));
  if (outcome.is_inconsistent()) out.push_back(make_constraint(ConstraintKind::generalisation, h));
  if (outcome.completeness == Completeness::totally_incomplete)
    out.push_back(make_constraint(ConstraintKind::redundancy, h));
  return out;
}

bool violates(const Hypothesis& h, const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::specialisation:
      return theory_subsumes(c.anchor, h);
    case ConstraintKind::generalisation:
      return theory_subsumes(h, c.anchor);
    case ConstraintKind::redundancy: {
      if (!h.is_separable()) return false;
      // A subset is subsumed by the anchor iff each of its clauses is, so the
      // smallest-first subset scan always stops at a singleton when it succeeds.
      auto anchor = flatten(c.anchor);
      for (const auto& clause : h.clauses) {
        FlatClause d = flatten(clause);
        for (const auto& a : anchor)
          if (subsumes(a, d)) return true;
      }
      return false;
    }
  }
  return false;
}

std::string to_wire(const Constraint& c) {
  std::string text = to_text(c.anchor);
  std::replace(text.begin(), text.end(), '\n', ' ');
  return std::string(to_string(c.kind)) + "\t" + text + "\t" + hex_id(c.id);
}

Constraint from_wire(std::string_view line) {
  auto first = line.find('\t');
  auto last = line.rfind('\t');
  if (first == std::string_view::npos || first == last)
    throw Error("malformed constraint line: expected three tab-separated fields");
  ConstraintKind kind = parse_constraint_kind(line.substr(0, first));
  Hypothesis anchor = parse_hypothesis(line.substr(first + 1, last - first - 1));
  Constraint c = make_constraint(kind, anchor);
  if (hex_id(c.id) != line.substr(last + 1))
    throw Error("constraint id does not match its content");
  return c;
}

Literal unflatten(const FlatLiteral& lit) {
  Literal out{{Symbol::from_id(lit.pred), lit.arity}, {}};
  out.args.assign(lit.args.begin(), lit.args.begin() + lit.arity);
  return out;
}

}  // namespace lff
