#include "lff/generate.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "lff/error.hpp"

namespace lff {

namespace {

constexpr LitId kNoLit = std::numeric_limits<LitId>::max();

std::uint32_t var_mask(const Literal& lit) {
  std::uint32_t m = 0;
  for (Var v : lit.args) m |= 1u << v;
  return m;
}

bool lex_less(std::span<const LitId> a, std::span<const LitId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

bool size_reachable(const Bias& bias, int m) {
  for (int k = 1; k <= bias.max_clauses; ++k)
    if (2 * k <= m && m <= k * (1 + bias.max_body)) return true;
  return false;
}

std::uint64_t ClauseSpace::pred_bit(std::uint32_t pred_id, int arity) {
  std::uint64_t h = (pred_id * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(arity);
  h *= 0xff51afd7ed558ccdULL;
  return 1ULL << (h >> 58);
}

std::uint64_t ClauseSpace::head_bits(const FlatLiteral& lit, int head_arity) {
  std::uint64_t bits = 0;
  for (std::uint8_t i = 0; i < lit.arity; ++i) {
    if (lit.args[i] >= head_arity) continue;
    std::uint64_t h = (lit.pred * 0x9E3779B97F4A7C15ULL) ^ (static_cast<std::uint64_t>(lit.arity) << 8) ^
                      (static_cast<std::uint64_t>(i) << 16) ^ (static_cast<std::uint64_t>(lit.args[i]) << 24);
    h *= 0xff51afd7ed558ccdULL;
    bits |= 1ULL << (h >> 58);
  }
  return bits;
}

ClauseSpace::ClauseSpace(Bias bias) : bias_(std::move(bias)) {
  validate(bias_);
  head_.pred = bias_.head;
  for (int i = 0; i < bias_.head.arity; ++i) head_.args.push_back(static_cast<Var>(i));
  flat_head_ = flatten(head_);
  preds_ = bias_.callable();

  const std::size_t v = static_cast<std::size_t>(bias_.max_vars);
  std::vector<std::pair<Literal, std::size_t>> all;  // literal, code
  std::size_t code = 0;
  for (std::size_t p = 0; p < preds_.size(); ++p) {
    pred_offset_.push_back(code);
    std::size_t count = 1;
    for (int i = 0; i < preds_[p].arity; ++i) count *= v;
    for (std::size_t t = 0; t < count; ++t, ++code) {
      Literal lit{preds_[p], std::vector<Var>(preds_[p].arity)};
      std::size_t rest = t;
      for (int i = preds_[p].arity - 1; i >= 0; --i) {
        lit.args[i] = static_cast<Var>(rest % v);
        rest /= v;
      }
      all.emplace_back(std::move(lit), code);
    }
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  code_to_id_.assign(code, kNoLit);
  for (auto& [lit, c] : all) {
    if (lit == head_) continue;
    code_to_id_[c] = static_cast<LitId>(universe_.size());
    auto it = std::find(preds_.begin(), preds_.end(), lit.pred);
    lit_pred_.push_back(static_cast<std::size_t>(it - preds_.begin()));
    universe_.push_back(std::move(lit));
  }
  blocks_ = std::make_unique<Slot[]>(static_cast<std::size_t>(bias_.max_body) + 1);
}

LitId ClauseSpace::lookup(std::size_t pred_index, std::span<const Var> args) const {
  std::size_t code = 0;
  for (Var a : args) code = code * static_cast<std::size_t>(bias_.max_vars) + a;
  return code_to_id_[pred_offset_[pred_index] + code];
}

bool ClauseSpace::conforming(std::span<const LitId> body) const {
  const std::uint32_t head = (1u << bias_.head.arity) - 1;
  std::uint32_t seen = 0;
  for (LitId id : body) seen |= var_mask(universe_[id]);
  if ((seen & head) != head) return false;
  std::uint32_t reached = head;
  for (bool changed = true; changed;) {
    changed = false;
    for (LitId id : body) {
      std::uint32_t m = var_mask(universe_[id]);
      if ((m & reached) && (m & ~reached)) {
        reached |= m;
        changed = true;
      }
    }
  }
  return reached == (seen | head);
}

// The body is canonical iff no renaming of its body-only variables yields a
// lexicographically smaller sorted id sequence. Body-only variables are the
// contiguous range after the head variables because of how the builder
// introduces them.
bool ClauseSpace::canonical(std::span<const LitId> body) const {
  const int a = bias_.head.arity;
  int top = a - 1;
  for (LitId id : body)
    for (Var v : universe_[id].args) top = std::max<int>(top, v);
  const int k = top - a + 1;
  if (k < 2) return true;
  std::vector<Var> perm(k);
  std::iota(perm.begin(), perm.end(), static_cast<Var>(a));
  std::vector<LitId> renamed(body.size());
  std::array<Var, kMaxArity> args{};
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      const Literal& lit = universe_[body[i]];
      for (std::size_t j = 0; j < lit.args.size(); ++j)
        args[j] = lit.args[j] < a ? lit.args[j] : perm[lit.args[j] - a];
      renamed[i] = lookup(lit_pred_[body[i]], {args.data(), lit.args.size()});
    }
    std::sort(renamed.begin(), renamed.end());
    if (lex_less(renamed, body)) return false;
  }
  return true;
}

void ClauseSpace::build(Block& b, int len, std::stop_token stop) const {
  b.len = len;
  const LitId n = static_cast<LitId>(universe_.size());
  std::vector<LitId> cur;
  std::uint64_t ticks = 0;

  auto emit = [&] {
    if (!conforming(cur) || !canonical(cur)) return;
    std::uint64_t mask = 0, heads = 0;
    bool rec = false;
    for (LitId id : cur) {
      const Literal& lit = universe_[id];
      mask |= pred_bit(lit.pred.name.id(), lit.pred.arity);
      rec |= lit.pred == bias_.head;
      b.lits.push_back(id);
      b.flat.push_back(flatten(lit));
      heads |= head_bits(b.flat.back(), bias_.head.arity);
    }
    b.pred_mask.push_back(mask);
    b.head_mask.push_back(heads);
    b.recursive.push_back(rec ? 1 : 0);
  };

  // Body-only variables must be introduced in order: a literal may use at most
  // one past the largest variable seen so far, scanning arguments left to right.
  auto rec = [&](auto& self, LitId start, int top) -> void {
    if (static_cast<int>(cur.size()) == len) {
      if ((++ticks & 0xfff) == 0 && stop.stop_requested()) throw Cancelled();
      emit();
      return;
    }
    const LitId need = static_cast<LitId>(len - cur.size());
    for (LitId id = start; id + need <= n; ++id) {
      int t = top;
      bool ok = true;
      for (Var v : universe_[id].args) {
        if (v <= t) continue;
        if (v == t + 1) {
          t = v;
        } else {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cur.push_back(id);
      self(self, id + 1, t);
      cur.pop_back();
    }
  };
  rec(rec, 0, bias_.head.arity - 1);
}

const ClauseSpace::Block& ClauseSpace::block(int len, std::stop_token stop) const {
  if (len < 1 || len > bias_.max_body) throw Error("body length out of range");
  Slot& s = blocks_[static_cast<std::size_t>(len)];
  std::lock_guard lock(s.mutex);
  if (!s.ready) {
    Block b;
    build(b, len, stop);
    s.block = std::move(b);
    s.ready = true;
  }
  return s.block;
}

Clause ClauseSpace::clause(ClauseRef ref) const {
  const Block& b = block(ref.len);
  Clause c{head_, {}};
  for (LitId id : b.body(ref.index)) c.body.push_back(universe_[id]);
  return c;
}

ConstraintIndex::ConstraintIndex(std::shared_ptr<const ClauseSpace> space)
    : space_(std::move(space)), status_(static_cast<std::size_t>(space_->bias().max_body) + 1) {}

std::uint32_t ConstraintIndex::intern(const Clause& c) {
  const int arity = space_->bias().head.arity;
  Anchor a{flatten(c.head), {}, 0, 0, 0, false};
  std::u32string key;
  auto put = [&key](const FlatLiteral& l) {
    key.push_back(l.pred);
    key.push_back(l.arity);
    for (std::uint8_t i = 0; i < l.arity; ++i) key.push_back(static_cast<char32_t>(l.args[i]));
  };
  put(a.head);
  for (const auto& l : c.body) {
    a.body.push_back(flatten(l));
    put(a.body.back());
    a.mask |= ClauseSpace::pred_bit(l.pred.name.id(), l.pred.arity);
    a.lower_heads |= ClauseSpace::head_bits(a.body.back(), arity);
  }
  auto [it, fresh] = anchor_ids_.try_emplace(std::move(key), static_cast<std::uint32_t>(anchors_.size()));
  if (!fresh) return it->second;
  // head features only line up under the identity head mapping
  bool plain = a.head.arity == arity;
  for (std::uint8_t i = 0; i < a.head.arity && plain; ++i) plain = a.head.args[i] == static_cast<Var>(i);
  a.upper_heads = plain ? a.lower_heads : ~0ULL;
  if (!plain) a.lower_heads = 0;
  anchors_.push_back(std::move(a));
  return it->second;
}

bool ConstraintIndex::add(const Constraint& c) {
  if (c.anchor.clauses.size() > 64)
    throw Error("constraint anchors are limited to 64 clauses");
  if (!ids_.insert(c.id).second) return false;
  ++count_;
  std::vector<std::uint32_t> ids;
  for (const auto& clause : c.anchor.clauses) ids.push_back(intern(clause));
  switch (c.kind) {
    case ConstraintKind::generalisation: {
      std::size_t n = ids.size();
      gen_.push_back({std::move(ids), n == 64 ? ~0ULL : (1ULL << n) - 1});
      break;
    }
    case ConstraintKind::redundancy:
      for (auto id : ids) anchors_[id].redundant = true;
      ++red_count_;
      break;
    case ConstraintKind::specialisation: {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      const std::size_t k = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(space_->bias().max_clauses));
      std::u32string key;
      auto rec = [&](auto& self, std::size_t from) -> void {
        if (!key.empty()) spec_keys_.insert(key);
        if (key.size() == k) return;
        for (std::size_t i = from; i < ids.size(); ++i) {
          key.push_back(ids[i]);
          self(self, i + 1);
          key.pop_back();
        }
      };
      rec(rec, 0);
      break;
    }
  }
  return true;
}

void ConstraintIndex::refresh(Status& s, ClauseRef ref) {
  const auto& block = space_->block(ref.len);
  const FlatLiteral& head = space_->flat_head();
  auto body = block.flat_body(ref.index);
  const std::uint64_t cmask = block.pred_mask[ref.index];
  const std::uint64_t hmask = block.head_mask[ref.index];

  const auto na = static_cast<std::uint32_t>(anchors_.size());
  bool grew = false;
  for (std::uint32_t id = s.anchors_upto; id < na; ++id) {
    const Anchor& a = anchors_[id];
    if ((a.mask & ~cmask) != 0 || (a.lower_heads & ~hmask) != 0) continue;
    if (!flat_subsumes(a.head, a.body, head, body)) continue;
    s.sub.push_back(id);
    grew = true;
  }
  s.anchors_upto = na;
  if (grew || s.red_upto != red_count_) {
    s.redundant = std::any_of(s.sub.begin(), s.sub.end(), [&](std::uint32_t id) { return anchors_[id].redundant; });
    s.red_upto = red_count_;
  }

  const auto ng = static_cast<std::uint32_t>(gen_.size());
  for (std::uint32_t cid = s.gen_upto; cid < ng; ++cid) {
    const Entry& e = gen_[cid];
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < e.anchors.size(); ++i) {
      const Anchor& a = anchors_[e.anchors[i]];
      if ((cmask & ~a.mask) != 0 || (hmask & ~a.upper_heads) != 0) continue;
      if (flat_subsumes(head, body, a.head, a.body)) covered |= 1ULL << i;
    }
    if (covered == e.full) {
      s.banned = true;
      s.gen.clear();
      s.sub.clear();
      break;
    }
    if (covered) s.gen.emplace_back(cid, covered);
  }
  s.gen_upto = ng;
}

const ConstraintIndex::Status& ConstraintIndex::status(ClauseRef ref) {
  auto& row = status_[ref.len];
  if (row.empty()) row.resize(space_->block(ref.len).size());
  Status& s = row[ref.index];
  if (!s.banned && (s.anchors_upto < anchors_.size() || s.gen_upto < gen_.size() || s.red_upto < red_count_))
    refresh(s, ref);
  return s;
}

// Picks one subsuming anchor per clause; the chosen set must be a subset of
// some specialisation anchor set, and so must every partial choice.
bool ConstraintIndex::spec_search(std::size_t i, const std::u32string& key) {
  const auto& st = status_scratch_;
  std::u32string next;
  for (std::uint32_t id : st[i]->sub) {
    next = key;
    auto pos = std::lower_bound(next.begin(), next.end(), static_cast<char32_t>(id));
    if (pos == next.end() || *pos != id) next.insert(pos, static_cast<char32_t>(id));
    if (!spec_keys_.contains(next)) continue;
    if (i + 1 == st.size() || spec_search(i + 1, next)) return true;
  }
  return false;
}

namespace {

using GenList = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

std::uint64_t coverage(const GenList& v, std::uint32_t cid) {
  auto it = std::lower_bound(v.begin(), v.end(), cid, [](const auto& e, std::uint32_t c) { return e.first < c; });
  return it != v.end() && it->first == cid ? it->second : 0;
}

}  // namespace

bool ConstraintIndex::violated(std::span<const ClauseRef> h) {
  if (h.empty()) return false;
  bool separable = true, any_redundant = false;
  auto& st = status_scratch_;
  st.clear();
  for (const ClauseRef& ref : h) {
    const Status& s = status(ref);
    if (s.banned) return true;
    separable &= space_->block(ref.len).recursive[ref.index] == 0;
    any_redundant |= s.redundant;
    st.push_back(&s);
  }
  if (separable && any_redundant) return true;
  std::sort(st.begin(), st.end(), [](auto* a, auto* b) { return a->sub.size() < b->sub.size(); });
  if (!st[0]->sub.empty() && spec_search(0, {})) return true;

  // Generalisation: a single status never holds full coverage, so a fully
  // covered constraint shows up in at least two lists, hence in one of all
  // but the longest.
  std::sort(st.begin(), st.end(), [](auto* a, auto* b) { return a->gen.size() < b->gen.size(); });
  for (std::size_t i = 0; i + 1 < st.size(); ++i)
    for (const auto& [cid, bits] : st[i]->gen) {
      std::uint64_t covered = bits;
      for (std::size_t j = 0; j < st.size(); ++j)
        if (j != i) covered |= coverage(st[j]->gen, cid);
      if (covered == gen_[cid].full) return true;
    }
  return false;
}

namespace {

void check_size(const Bias& bias, int m) {
  if (m < 2) throw InvalidBias("hypothesis size must be at least 2");
  if (!size_reachable(bias, m))
    throw InvalidBias("no hypothesis of size " + std::to_string(m) + " fits the bias");
}

}  // namespace

Generator::Generator(const Bias& bias, int m, std::span<const Constraint> cons, Heuristic heur)
    : m_(m), heur_(heur) {
  validate(bias);
  check_size(bias, m);
  index_ = std::make_shared<ConstraintIndex>(std::make_shared<ClauseSpace>(bias));
  space_ = &index_->space();
  add_constraints(cons);
  init();
}

Generator::Generator(std::shared_ptr<ConstraintIndex> index, int m, Heuristic heur,
                     std::stop_token stop)
    : index_(std::move(index)), space_(&index_->space()), m_(m), heur_(heur), stop_(std::move(stop)) {
  check_size(space_->bias(), m);
  init();
}

void Generator::init() {
  rng_.seed(heur_.seed);
  const std::size_t n = static_cast<std::size_t>(space_->bias().max_body) + 1;
  order_.resize(n);
  rank_.resize(n);
}

void Generator::add_constraints(std::span<const Constraint> cs) {
  for (const auto& c : cs) index_->add(c);
}

bool Generator::lengths_ok(int remaining, int len, std::size_t depth) const {
  const Bias& b = space_->bias();
  if (len > b.max_body || len + 1 > remaining) return false;
  int rest = remaining - (len + 1);
  if (rest == 0) return true;
  int clauses_left = b.max_clauses - static_cast<int>(depth) - 1;
  return clauses_left > 0 && rest >= 2 && rest <= clauses_left * (1 + b.max_body);
}

// With seed 0 clauses are visited in canonical order. Other seeds visit each
// length block in a seeded permutation; across blocks clauses are interleaved by
// relative position so that "after prev" is still a suffix of every block.
std::uint32_t Generator::lower_rank(int len, const std::optional<ClauseRef>& prev) {
  const auto& block = space_->block(len, stop_);
  const auto n = static_cast<std::uint32_t>(block.size());
  if (heur_.seed != 0 && order_[len].size() != n) {
    auto& order = order_[len];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 perm_rng(heur_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(len));
    std::shuffle(order.begin(), order.end(), perm_rng);
    rank_[len].resize(n);
    for (std::uint32_t r = 0; r < n; ++r) rank_[len][order[r]] = r;
  }
  if (!prev) return 0;
  std::uint32_t lo = 0, hi = n;
  if (heur_.seed == 0) {
    auto pb = space_->block(prev->len).body(prev->index);
    while (lo < hi) {
      std::uint32_t mid = lo + (hi - lo) / 2;
      if (lex_less(pb, block.body(mid)))
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }
  using U = unsigned __int128;
  const U pn = space_->block(prev->len).size();
  const U pr = rank_[prev->len][prev->index];
  auto after = [&](std::uint32_t r) {
    U lhs = (2 * U(r) + 1) * pn, rhs = (2 * pr + 1) * U(n);
    return lhs > rhs || (lhs == rhs && len > prev->len);
  };
  while (lo < hi) {
    std::uint32_t mid = lo + (hi - lo) / 2;
    if (after(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::uint32_t Generator::clause_at(int len, std::uint32_t rank) const {
  return heur_.seed == 0 ? rank : order_[len][rank];
}

bool Generator::advance_block(Frame& f) {
  for (int len = f.len + 1; len <= space_->bias().max_body; ++len) {
    if (!lengths_ok(f.remaining, len, chosen_.size())) continue;
    std::uint32_t start = lower_rank(len, f.prev);
    auto end = static_cast<std::uint32_t>(space_->block(len).size());
    if (start >= end) continue;
    f.len = len;
    f.idx = start;
    f.end = end;
    return true;
  }
  f.len = space_->bias().max_body;
  return false;
}

void Generator::open_frame(int remaining, std::optional<ClauseRef> prev) {
  Frame f;
  f.remaining = remaining;
  f.prev = prev;
  if (heur_.random_freq > 0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    f.shuffled = coin(rng_) < heur_.random_freq;
  }
  if (f.shuffled) {
    for (int len = 1; len <= space_->bias().max_body; ++len) {
      if (!lengths_ok(remaining, len, chosen_.size())) continue;
      std::uint32_t start = lower_rank(len, prev);
      auto end = static_cast<std::uint32_t>(space_->block(len).size());
      for (std::uint32_t r = start; r < end; ++r)
        f.pool.push_back({static_cast<std::uint8_t>(len), clause_at(len, r)});
    }
    std::shuffle(f.pool.begin(), f.pool.end(), rng_);
  } else {
    advance_block(f);
  }
  stack_.push_back(std::move(f));
}

std::optional<ClauseRef> Generator::pull(Frame& f) {
  if (f.shuffled) {
    if (f.pos < f.pool.size()) return f.pool[f.pos++];
    return std::nullopt;
  }
  for (;;) {
    if (f.idx < f.end) {
      std::uint32_t r = f.idx++;
      return ClauseRef{static_cast<std::uint8_t>(f.len), clause_at(f.len, r)};
    }
    if (!advance_block(f)) return std::nullopt;
  }
}

bool Generator::leaf_ok() {
  if (space_->bias().allow_recursion) {
    bool any_rec = false, any_base = false;
    for (const auto& r : chosen_)
      (space_->block(r.len).recursive[r.index] ? any_rec : any_base) = true;
    if (any_rec && !any_base) return false;
  }
  return !index_->violated(chosen_);
}

std::optional<Hypothesis> Generator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    open_frame(m_, std::nullopt);
  } else {
    chosen_.pop_back();
  }
  const bool prune_redundant = !space_->bias().allow_recursion;
  while (!stack_.empty()) {
    if ((++ticks_ & 0xff) == 0 && stop_.stop_requested()) throw Cancelled();
    std::optional<ClauseRef> c = pull(stack_.back());
    if (!c) {
      stack_.pop_back();
      if (!chosen_.empty()) chosen_.pop_back();
      continue;
    }
    const auto& st = index_->status(*c);
    if (st.banned || (prune_redundant && st.redundant)) continue;
    const int rest = stack_.back().remaining - (c->len + 1);
    chosen_.push_back(*c);
    if (rest > 0) {
      open_frame(rest, *c);
      continue;
    }
    ++leaves_;
    if (!leaf_ok()) {
      chosen_.pop_back();
      continue;
    }
    std::vector<ClauseRef> refs = chosen_;
    std::sort(refs.begin(), refs.end(), [&](ClauseRef x, ClauseRef y) {
      return lex_less(space_->block(x.len).body(x.index), space_->block(y.len).body(y.index));
    });
    Hypothesis h;
    for (const auto& r : refs) h.clauses.push_back(space_->clause(r));
    return h;
  }
  done_ = true;
  return std::nullopt;
}

}  // namespace lff
