#include "lff/tester.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <unordered_map>

#include "lff/error.hpp"

namespace lff {

namespace {

constexpr std::array<std::pair<const char*, int>, kBuiltinCount> kBuiltins = {{
    {"head", 2},
    {"tail", 2},
    {"element", 2},
    {"increment", 2},
    {"decrement", 2},
    {"geq", 2},
    {"empty", 1},
    {"zero", 1},
    {"one", 1},
    {"even", 1},
    {"odd", 1},
    {"prepend", 3},
}};

}  // namespace

PredSig signature(Builtin b) {
  const auto& [name, arity] = kBuiltins[static_cast<std::size_t>(b)];
  return {Symbol(name), arity};
}

std::optional<Builtin> parse_builtin(std::string_view name) {
  for (std::size_t i = 0; i < kBuiltins.size(); ++i)
    if (name == kBuiltins[i].first) return static_cast<Builtin>(i);
  return std::nullopt;
}

void validate(const EvalLimits& lim) {
  if (lim.max_depth <= 0 || lim.max_steps <= 0) throw Error("evaluation limits must be positive");
}

namespace {

enum Tag : std::uint8_t { kUnbound, kRef, kInt, kAtom, kNil, kCons };

struct Value {
  Tag tag = kUnbound;
  std::int64_t v = 0;
};

struct Cell {
  Value head, tail;
};

enum class Kind : std::uint8_t { builtin, facts, user };

struct CLit {
  Kind kind = Kind::user;
  std::uint32_t id = 0;
  std::uint8_t arity = 0;
  std::array<Var, kMaxArity> args{};
};

struct CClause {
  std::uint32_t user = 0;
  int nvars = 0;
  std::uint8_t arity = 0;
  std::array<Var, kMaxArity> head{};
  std::vector<CLit> body;
  // Literal order per mask of bound head arguments, computed on first use.
  std::vector<std::vector<std::uint8_t>> orders;
  std::vector<std::uint8_t> state;
};

struct UserPred {
  PredSig sig;
  std::vector<std::uint32_t> clauses;
  int table = -1;
};

struct FactTable {
  PredSig sig;
  std::vector<Value> rows;  // arity values per row
  std::vector<std::uint32_t> all;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> index;
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kQuery = kNone;

struct Frame {
  std::uint32_t clause;
  std::uint32_t base;
  std::uint32_t depth;
  std::uint32_t parent;
  const std::uint8_t* order;
  std::uint8_t len;
  std::uint8_t parent_idx;
  // For a call with every argument bound: the choice height to cut back to
  // once the call succeeds. Bound values are ground, so further proofs of the
  // same call add nothing.
  std::uint32_t once;
};

struct Cont {
  std::uint32_t frame;
  std::uint32_t idx;
};

enum class CK : std::uint8_t { user, facts, element };

struct Choice {
  CK kind;
  Cont goal;
  std::uint32_t trail, slots, frames, cells;
  std::uint32_t alt = 0;
  const std::vector<std::uint32_t>* rows = nullptr;
  Value list;
};

std::uint32_t var_bit(Var v) { return 1u << v; }

constexpr std::uint8_t kFlounder = 0xff;

}  // namespace

class Tester::Engine {
 public:
  Engine(std::shared_ptr<const BKProgram> bk, EvalLimits lim) : bk_(std::move(bk)), lim_(lim) {
    validate(lim_);
    std::map<PredSig, std::vector<const GroundAtom*>> grouped;
    for (const auto& f : bk_->facts) grouped[f.pred].push_back(&f);
    for (const auto& r : bk_->relations) grouped[r];
    for (auto& [sig, atoms] : grouped) {
      FactTable t;
      t.sig = sig;
      t.index.resize(static_cast<std::size_t>(sig.arity));
      for (const GroundAtom* a : atoms) {
        if (static_cast<int>(a->args.size()) != sig.arity) throw Error("fact arity mismatch");
        auto row = static_cast<std::uint32_t>(t.all.size());
        for (int i = 0; i < sig.arity; ++i) {
          Value v = load(a->args[i]);
          t.rows.push_back(v);
          t.index[i][hash(v)].push_back(row);
        }
        t.all.push_back(row);
      }
      table_of_[sig] = static_cast<int>(tables_.size());
      tables_.push_back(std::move(t));
    }
  }

  // Converts a ground term into the permanent part of the cell store.
  Value load(const Term& t) {
    if (t.is_int()) return {kInt, t.as_int()};
    if (t.is_atom()) return {kAtom, std::get<Symbol>(t.value).id()};
    Value v{kNil, 0};
    const auto& items = t.as_list();
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      Value h = load(*it);
      cells_.push_back({h, v});
      v = {kCons, static_cast<std::int64_t>(cells_.size() - 1)};
    }
    return v;
  }

  std::vector<Value> load(const Example& e) {
    std::vector<Value> out;
    for (const auto& t : e.args) out.push_back(load(t));
    return out;
  }

  void seal() { base_cells_ = cells_.size(); }
  void release() { cells_.resize(base_cells_); }
  std::size_t cell_count() const { return cells_.size(); }

  void compile(const Hypothesis& h) {
    users_.clear();
    user_of_.clear();
    clauses_.clear();
    for (const auto& c : h.clauses) user_index(c.head.pred);
    for (const auto& c : h.clauses) {
      CClause cc;
      cc.user = static_cast<std::uint32_t>(user_of_.at(c.head.pred));
      cc.arity = static_cast<std::uint8_t>(c.head.args.size());
      int top = -1;
      for (std::size_t i = 0; i < c.head.args.size(); ++i) {
        cc.head[i] = c.head.args[i];
        top = std::max<int>(top, c.head.args[i]);
      }
      for (std::size_t i = 0; i < c.head.args.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (c.head.args[i] == c.head.args[j])
            throw Error("clause heads must have distinct variables");
      for (const auto& l : c.body) {
        CLit lit = resolve(l.pred, false);
        lit.arity = static_cast<std::uint8_t>(l.args.size());
        for (std::size_t i = 0; i < l.args.size(); ++i) {
          lit.args[i] = l.args[i];
          top = std::max<int>(top, l.args[i]);
        }
        cc.body.push_back(lit);
      }
      if (top >= 32) throw Error("clauses are limited to 32 variables");
      cc.nvars = top + 1;
      cc.orders.resize(std::size_t{1} << cc.arity);
      cc.state.assign(std::size_t{1} << cc.arity, 0);
      users_[user_of_.at(c.head.pred)].clauses.push_back(static_cast<std::uint32_t>(clauses_.size()));
      clauses_.push_back(std::move(cc));
    }
  }

  CLit query_literal(const PredSig& pred) { return resolve(pred, true); }

  // Cells above `floor` are scratch space of this query.
  Proof run(const CLit& query, std::span<const Value> args, std::stop_token stop, std::uint64_t& steps_out,
            std::size_t floor = 0) {
    cells_.resize(std::max(floor, base_cells_));
    slots_.assign(args.begin(), args.end());
    trail_.clear();
    frames_.clear();
    choices_.clear();
    query_ = query;
    query_.arity = static_cast<std::uint8_t>(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) query_.args[i] = static_cast<Var>(i);
    frames_.push_back({kQuery, 0, 0, kNone, nullptr, 1, 0, kNone});
    cont_ = {0, 0};
    cut_ = false;
    std::uint64_t steps = 0;
    Proof result;
    for (;;) {
      while (cont_.frame != kNone && cont_.idx == frames_[cont_.frame].len) {
        const Frame& f = frames_[cont_.frame];
        if (f.once < choices_.size()) choices_.resize(f.once);
        cont_ = {f.parent, static_cast<std::uint32_t>(f.parent_idx) + 1};
      }
      if (cont_.frame == kNone) {
        result = Proof::proved;
        break;
      }
      if (++steps > static_cast<std::uint64_t>(lim_.max_steps)) {
        result = Proof::resource_exhausted;
        break;
      }
      if ((steps & 0x3ff) == 1 && stop.stop_requested()) throw Cancelled();
      if (!call(cont_) && !backtrack()) {
        result = cut_ ? Proof::resource_exhausted : Proof::not_proved;
        break;
      }
    }
    steps_out += steps;
    return result;
  }

 private:
  int user_index(const PredSig& p) {
    auto [it, fresh] = user_of_.emplace(p, static_cast<int>(users_.size()));
    if (fresh) {
      UserPred u{p, {}, -1};
      if (auto t = table_of_.find(p); t != table_of_.end()) u.table = t->second;
      users_.push_back(std::move(u));
    }
    return it->second;
  }

  CLit resolve(const PredSig& p, bool query) {
    CLit lit;
    if (auto u = user_of_.find(p); u != user_of_.end()) {
      lit.kind = Kind::user;
      lit.id = static_cast<std::uint32_t>(u->second);
      return lit;
    }
    if (auto t = table_of_.find(p); t != table_of_.end()) {
      lit.kind = Kind::facts;
      lit.id = static_cast<std::uint32_t>(t->second);
      return lit;
    }
    if (auto b = parse_builtin(p.name.str());
        b && bk_->builtins.contains(*b) && signature(*b).arity == p.arity) {
      lit.kind = Kind::builtin;
      lit.id = static_cast<std::uint32_t>(*b);
      return lit;
    }
    if (query) {
      lit.kind = Kind::user;
      lit.id = static_cast<std::uint32_t>(user_index(p));
      return lit;
    }
    throw UnknownPredicate("unknown predicate " + to_string(p));
  }

  static bool ready(const CLit& lit, std::uint32_t bound) {
    auto b = [&](int i) { return (bound & var_bit(lit.args[i])) != 0; };
    switch (lit.kind) {
      case Kind::facts:
        return true;
      case Kind::user:
        for (int i = 0; i < lit.arity; ++i)
          if (b(i)) return true;
        return lit.arity == 0;
      case Kind::builtin:
        switch (static_cast<Builtin>(lit.id)) {
          case Builtin::head:
          case Builtin::tail:
          case Builtin::element:
          case Builtin::even:
          case Builtin::odd:
            return b(0);
          case Builtin::increment:
          case Builtin::decrement:
            return b(0) || b(1);
          case Builtin::geq:
            return b(0) && b(1);
          case Builtin::empty:
          case Builtin::zero:
          case Builtin::one:
            return true;
          case Builtin::prepend:
            return (b(0) && b(1)) || b(2);
        }
    }
    return false;
  }

  // Leftmost ready literal first, given the head arguments bound at call time.
  // A goal that succeeds grounds all its arguments, so readiness is static. If
  // no literal is ready the order ends in kFlounder; reaching it cuts the branch.
  const std::vector<std::uint8_t>& order(CClause& c, std::uint32_t mask) {
    if (c.state[mask]) return c.orders[mask];
    std::uint32_t bound = 0;
    for (int i = 0; i < c.arity; ++i)
      if (mask & (1u << i)) bound |= var_bit(c.head[i]);
    std::vector<std::uint8_t> out;
    std::vector<bool> used(c.body.size(), false);
    for (std::size_t step = 0; step < c.body.size(); ++step) {
      std::size_t pick = c.body.size();
      for (std::size_t i = 0; i < c.body.size(); ++i)
        if (!used[i] && ready(c.body[i], bound)) {
          pick = i;
          break;
        }
      if (pick == c.body.size()) {
        out.push_back(kFlounder);
        break;
      }
      used[pick] = true;
      out.push_back(static_cast<std::uint8_t>(pick));
      for (int i = 0; i < c.body[pick].arity; ++i) bound |= var_bit(c.body[pick].args[i]);
    }
    c.orders[mask] = std::move(out);
    c.state[mask] = 1;
    return c.orders[mask];
  }

  Value deref(Value v) const {
    while (v.tag == kRef) {
      const Value& s = slots_[static_cast<std::size_t>(v.v)];
      if (s.tag == kUnbound) return v;
      v = s;
    }
    return v;
  }

  std::uint64_t hash(Value v) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    auto mix = [&](std::uint64_t x) {
      h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    };
    while (v.tag == kCons) {
      const Cell& c = cells_[static_cast<std::size_t>(v.v)];
      mix(kCons);
      mix(hash(c.head));
      v = c.tail;
    }
    mix(v.tag);
    mix(static_cast<std::uint64_t>(v.v));
    return h;
  }

  bool equal(Value a, Value b) const {
    for (;;) {
      if (a.tag != b.tag) return false;
      if (a.tag != kCons) return a.v == b.v;
      if (a.v == b.v) return true;
      const Cell& x = cells_[static_cast<std::size_t>(a.v)];
      const Cell& y = cells_[static_cast<std::size_t>(b.v)];
      if (!equal(x.head, y.head)) return false;
      a = x.tail;
      b = y.tail;
    }
  }

  void bind(Value ref, Value v) {
    slots_[static_cast<std::size_t>(ref.v)] = v;
    trail_.push_back(static_cast<std::uint32_t>(ref.v));
  }

  bool unify(Value a, Value b) {
    a = deref(a);
    b = deref(b);
    if (a.tag == kRef) {
      if (b.tag == kRef && b.v == a.v) return true;
      bind(a, b);
      return true;
    }
    if (b.tag == kRef) {
      bind(b, a);
      return true;
    }
    return equal(a, b);
  }

  const CLit& literal(const Frame& f, std::uint32_t idx) const {
    if (f.clause == kQuery) return query_;
    return clauses_[f.clause].body[f.order[idx]];
  }

  void args(Cont goal, std::array<Value, kMaxArity>& out) const {
    const Frame& f = frames_[goal.frame];
    const CLit& lit = literal(f, goal.idx);
    for (int i = 0; i < lit.arity; ++i) out[i] = deref(Value{kRef, f.base + lit.args[i]});
  }

  void push_choice(CK kind, Cont goal) {
    Choice c;
    c.kind = kind;
    c.goal = goal;
    c.trail = static_cast<std::uint32_t>(trail_.size());
    c.slots = static_cast<std::uint32_t>(slots_.size());
    c.frames = static_cast<std::uint32_t>(frames_.size());
    c.cells = static_cast<std::uint32_t>(cells_.size());
    choices_.push_back(c);
  }

  void undo(const Choice& c) {
    while (trail_.size() > c.trail) {
      slots_[trail_.back()] = Value{};
      trail_.pop_back();
    }
    slots_.resize(c.slots);
    frames_.resize(c.frames);
    cells_.resize(c.cells);
  }

  const std::vector<std::uint32_t>* candidates(const FactTable& t, const std::array<Value, kMaxArity>& a) const {
    for (int i = 0; i < t.sig.arity; ++i) {
      if (a[i].tag == kRef) continue;
      auto it = t.index[i].find(hash(a[i]));
      return it == t.index[i].end() ? &empty_ : &it->second;
    }
    return &t.all;
  }

  bool unify_row(const FactTable& t, std::uint32_t row, const std::array<Value, kMaxArity>& a) {
    const std::size_t n = static_cast<std::size_t>(t.sig.arity);
    for (std::size_t i = 0; i < n; ++i)
      if (!unify(a[i], t.rows[row * n + i])) return false;
    return true;
  }

  bool succeed(Cont goal) {
    cont_ = {goal.frame, goal.idx + 1};
    return true;
  }

  bool call(Cont goal) {
    const Frame& f = frames_[goal.frame];
    if (f.clause != kQuery && f.order[goal.idx] == kFlounder) {
      cut_ = true;
      return false;
    }
    const CLit& lit = literal(frames_[goal.frame], goal.idx);
    switch (lit.kind) {
      case Kind::builtin:
        return builtin(static_cast<Builtin>(lit.id), goal);
      case Kind::facts: {
        std::array<Value, kMaxArity> a;
        args(goal, a);
        const auto* rows = candidates(tables_[lit.id], a);
        if (rows->empty()) return false;
        push_choice(CK::facts, goal);
        choices_.back().rows = rows;
        return resume();
      }
      case Kind::user:
        if (repeats_ancestor(goal, lit)) {
          cut_ = true;
          return false;
        }
        push_choice(CK::user, goal);
        return resume();
    }
    return false;
  }

  // A ground call equal to a ground call it is nested in would repeat the
  // same search inside itself until the depth bound; give up now.
  bool repeats_ancestor(Cont goal, const CLit& lit) const {
    std::array<Value, kMaxArity> a;
    args(goal, a);
    for (int i = 0; i < lit.arity; ++i)
      if (a[i].tag == kRef) return false;
    for (std::uint32_t k = goal.frame; k != kNone && frames_[k].clause != kQuery; k = frames_[k].parent) {
      const Frame& f = frames_[k];
      const CClause& c = clauses_[f.clause];
      if (f.once == kNone || c.user != lit.id) continue;
      bool same = true;
      for (int i = 0; i < lit.arity && same; ++i)
        same = equal(deref(Value{kRef, f.base + c.head[i]}), a[i]);
      if (same) return true;
    }
    return false;
  }

  bool builtin(Builtin b, Cont goal) {
    std::array<Value, kMaxArity> a;
    args(goal, a);
    auto bound = [&](int i) { return a[i].tag != kRef; };
    auto integer = [](std::int64_t v) { return Value{kInt, v}; };
    switch (b) {
      case Builtin::head:
        if (a[0].tag != kCons) return false;
        return unify(a[1], cells_[static_cast<std::size_t>(a[0].v)].head) && succeed(goal);
      case Builtin::tail:
        if (a[0].tag != kCons) return false;
        return unify(a[1], cells_[static_cast<std::size_t>(a[0].v)].tail) && succeed(goal);
      case Builtin::element: {
        if (!bound(0)) break;
        if (a[0].tag != kCons) return false;
        if (bound(1)) {
          for (Value l = a[0]; l.tag == kCons; l = cells_[static_cast<std::size_t>(l.v)].tail)
            if (equal(cells_[static_cast<std::size_t>(l.v)].head, a[1])) return succeed(goal);
          return false;
        }
        push_choice(CK::element, goal);
        choices_.back().list = a[0];
        return resume();
      }
      case Builtin::increment:
      case Builtin::decrement: {
        const std::int64_t d = b == Builtin::increment ? 1 : -1;
        if (bound(0)) return a[0].tag == kInt && unify(a[1], integer(a[0].v + d)) && succeed(goal);
        if (bound(1)) return a[1].tag == kInt && unify(a[0], integer(a[1].v - d)) && succeed(goal);
        break;
      }
      case Builtin::geq:
        if (!bound(0) || !bound(1)) break;
        return a[0].tag == kInt && a[1].tag == kInt && a[0].v >= a[1].v && succeed(goal);
      case Builtin::empty:
        return unify(a[0], Value{kNil, 0}) && succeed(goal);
      case Builtin::zero:
        return unify(a[0], integer(0)) && succeed(goal);
      case Builtin::one:
        return unify(a[0], integer(1)) && succeed(goal);
      case Builtin::even:
      case Builtin::odd:
        if (!bound(0)) break;
        return a[0].tag == kInt && ((a[0].v & 1) == (b == Builtin::odd ? 1 : 0)) && succeed(goal);
      case Builtin::prepend:
        if (bound(0) && bound(1)) {
          if (a[1].tag != kNil && a[1].tag != kCons) return false;
          cells_.push_back({a[0], a[1]});
          return unify(a[2], Value{kCons, static_cast<std::int64_t>(cells_.size() - 1)}) && succeed(goal);
        }
        if (bound(2)) {
          if (a[2].tag != kCons) return false;
          const Cell c = cells_[static_cast<std::size_t>(a[2].v)];
          return unify(a[0], c.head) && unify(a[1], c.tail) && succeed(goal);
        }
        break;
    }
    cut_ = true;  // called in a mode it cannot decide
    return false;
  }

  bool try_clause(std::uint32_t k, Cont goal, const std::array<Value, kMaxArity>& a) {
    CClause& c = clauses_[k];
    const std::uint32_t depth = frames_[goal.frame].depth + 1;
    if (depth > static_cast<std::uint32_t>(lim_.max_depth)) {
      cut_ = true;
      return false;
    }
    const auto base = static_cast<std::uint32_t>(slots_.size());
    slots_.resize(base + static_cast<std::size_t>(c.nvars));
    std::uint32_t mask = 0;
    for (int i = 0; i < c.arity; ++i) {
      slots_[base + c.head[i]] = a[i];
      if (a[i].tag != kRef) mask |= 1u << i;
    }
    const auto& ord = order(c, mask);
    const bool ground = mask == (1u << c.arity) - 1;
    frames_.push_back({k, base, depth, goal.frame, ord.data(), static_cast<std::uint8_t>(ord.size()),
                       static_cast<std::uint8_t>(goal.idx),
                       ground ? static_cast<std::uint32_t>(choices_.size() - 1) : kNone});
    cont_ = {static_cast<std::uint32_t>(frames_.size() - 1), 0};
    return true;
  }

  // Tries the remaining alternatives of the newest choice point.
  bool resume() {
    Choice& c = choices_.back();
    const Cont goal = c.goal;
    std::array<Value, kMaxArity> a;
    switch (c.kind) {
      case CK::facts: {
        const FactTable& t = tables_[literal(frames_[goal.frame], goal.idx).id];
        while (c.alt < c.rows->size()) {
          undo(c);
          args(goal, a);
          std::uint32_t row = (*c.rows)[c.alt++];
          if (unify_row(t, row, a)) {
            if (c.alt == c.rows->size()) choices_.pop_back();
            return succeed(goal);
          }
        }
        break;
      }
      case CK::user: {
        const UserPred& u = users_[literal(frames_[goal.frame], goal.idx).id];
        const std::uint32_t nfacts =
            u.table < 0 ? 0 : static_cast<std::uint32_t>(tables_[static_cast<std::size_t>(u.table)].all.size());
        const std::uint32_t total = nfacts + static_cast<std::uint32_t>(u.clauses.size());
        while (c.alt < total) {
          undo(c);
          args(goal, a);
          std::uint32_t alt = c.alt++;
          bool ok = alt < nfacts ? unify_row(tables_[static_cast<std::size_t>(u.table)], alt, a) && succeed(goal)
                                 : try_clause(u.clauses[alt - nfacts], goal, a);
          if (ok) {
            // The frame pushed by try_clause sits above the marks, so popping
            // the choice point here keeps it.
            if (c.alt == total) choices_.pop_back();
            return true;
          }
        }
        break;
      }
      case CK::element: {
        while (c.list.tag == kCons) {
          undo(c);
          args(goal, a);
          const Cell& cell = cells_[static_cast<std::size_t>(c.list.v)];
          c.list = cell.tail;
          if (unify(a[1], cell.head)) {
            if (c.list.tag != kCons) choices_.pop_back();
            return succeed(goal);
          }
        }
        break;
      }
    }
    undo(choices_.back());
    choices_.pop_back();
    return false;
  }

  bool backtrack() {
    while (!choices_.empty())
      if (resume()) return true;
    return false;
  }

  std::shared_ptr<const BKProgram> bk_;
  EvalLimits lim_;
  std::vector<FactTable> tables_;
  std::map<PredSig, int> table_of_;
  std::vector<UserPred> users_;
  std::map<PredSig, int> user_of_;
  std::vector<CClause> clauses_;

  std::vector<Cell> cells_;
  std::size_t base_cells_ = 0;
  std::vector<Value> slots_;
  std::vector<std::uint32_t> trail_;
  std::vector<Frame> frames_;
  std::vector<Choice> choices_;
  CLit query_;
  Cont cont_{kNone, 0};
  bool cut_ = false;
  const std::vector<std::uint32_t> empty_;

 public:
  std::vector<std::vector<Value>> examples;
};

Tester::Tester(std::shared_ptr<const BKProgram> bk, std::vector<Example> pos, std::vector<Example> neg,
               EvalLimits lim)
    : engine_(std::make_unique<Engine>(std::move(bk), lim)), pos_count_(pos.size()) {
  for (const auto& e : pos) engine_->examples.push_back(engine_->load(e));
  for (const auto& e : neg) engine_->examples.push_back(engine_->load(e));
  examples_.reserve(pos.size() + neg.size());
  for (auto& e : pos) examples_.push_back(std::move(e));
  for (auto& e : neg) examples_.push_back(std::move(e));
  engine_->seal();
}

Tester::~Tester() = default;

Outcome Tester::test(const Hypothesis& h, std::stop_token stop) {
  engine_->compile(h);
  auto query = [&](std::size_t i) {
    ++counters_.queries;
    CLit q = engine_->query_literal(examples_[i].pred);
    Proof p = engine_->run(q, engine_->examples[i], stop, counters_.steps);
    if (p == Proof::resource_exhausted) ++counters_.exhausted;
    return p == Proof::proved;
  };
  std::size_t proved = 0, failed = 0;
  for (std::size_t i = 0; i < pos_count_ && !(proved && failed); ++i) (query(i) ? proved : failed)++;
  Outcome o;
  o.completeness = failed == 0    ? Completeness::complete
                   : proved == 0  ? Completeness::totally_incomplete
                                  : Completeness::incomplete;
  for (std::size_t i = pos_count_; i < examples_.size(); ++i)
    if (query(i)) {
      o.consistency = Consistency::inconsistent;
      break;
    }
  return o;
}

Proof Tester::entails(const Hypothesis& h, const Example& e, std::stop_token stop) {
  engine_->compile(h);
  ++counters_.queries;
  std::vector<Value> args = engine_->load(e);
  CLit q = engine_->query_literal(e.pred);
  Proof p = engine_->run(q, args, stop, counters_.steps, engine_->cell_count());
  engine_->release();
  if (p == Proof::resource_exhausted) ++counters_.exhausted;
  return p;
}

Proof entails(const BKProgram& b, const Hypothesis& h, const Example& e, const EvalLimits& lim) {
  Tester t(std::make_shared<const BKProgram>(b), {}, {}, lim);
  return t.entails(h, e);
}

Outcome test_hypothesis(const Hypothesis& h, const BKProgram& b, std::span<const Example> pos,
                        std::span<const Example> neg, const EvalLimits& lim) {
  if (pos.empty()) throw Error("at least one positive example is required");
  Tester t(std::make_shared<const BKProgram>(b), {pos.begin(), pos.end()}, {neg.begin(), neg.end()}, lim);
  return t.test(h);
}

}  // namespace lff
