#pragma once

// Enumeration of canonical, bias-conforming hypotheses of one exact size,
// filtered by an accumulated constraint store.

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stop_token>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/subsume.hpp"

namespace lff {

struct Heuristic {
  std::uint64_t seed = 0;
  double random_freq = 0.0;

  friend bool operator==(const Heuristic&, const Heuristic&) = default;
};

// True when some hypothesis of exactly m literals fits the clause bounds.
bool size_reachable(const Bias& bias, int m);

using LitId = std::uint32_t;

struct ClauseRef {
  std::uint8_t len = 0;  // body length
  std::uint32_t index = 0;

  friend bool operator==(const ClauseRef&, const ClauseRef&) = default;
};

// All canonical conforming clauses of a bias, grouped by body length. Body
// literals are ids into a literal universe sorted by literal order, so
// comparing id sequences compares clauses. Blocks are built on first use and
// are read-only afterwards; one space is shared by all workers.
class ClauseSpace {
 public:
  explicit ClauseSpace(Bias bias);

  const Bias& bias() const { return bias_; }
  const Literal& head() const { return head_; }
  const Literal& literal(LitId id) const { return universe_[id]; }
  std::size_t universe_size() const { return universe_.size(); }

  struct Block {
    int len = 0;
    std::vector<LitId> lits;              // len ids per clause, clauses in canonical order
    std::vector<std::uint64_t> pred_mask;  // per clause
    std::vector<std::uint64_t> head_mask;  // per clause, see head_bits
    std::vector<std::uint8_t> recursive;   // per clause
    std::vector<FlatLiteral> flat;         // len flat literals per clause

    std::size_t size() const { return pred_mask.size(); }
    std::span<const LitId> body(std::uint32_t i) const {
      return {lits.data() + static_cast<std::size_t>(i) * len, static_cast<std::size_t>(len)};
    }
    std::span<const FlatLiteral> flat_body(std::uint32_t i) const {
      return {flat.data() + static_cast<std::size_t>(i) * len, static_cast<std::size_t>(len)};
    }
  };

  // Throws Cancelled if stop is requested while the block is being built; a
  // later call retries the build.
  const Block& block(int len, std::stop_token stop = {}) const;

  Clause clause(ClauseRef ref) const;
  const FlatLiteral& flat_head() const { return flat_head_; }

  static std::uint64_t pred_bit(std::uint32_t pred_id, int arity);
  // Hashed (predicate, position, head variable) features of a body literal.
  // Heads are always the same distinct variables, so a subsuming clause's
  // features are a subset of the subsumed clause's.
  static std::uint64_t head_bits(const FlatLiteral& lit, int head_arity);

 private:
  void build(Block& b, int len, std::stop_token stop) const;
  bool canonical(std::span<const LitId> body) const;
  bool conforming(std::span<const LitId> body) const;
  LitId lookup(std::size_t pred_index, std::span<const Var> args) const;

  Bias bias_;
  Literal head_;
  FlatLiteral flat_head_;
  std::vector<PredSig> preds_;
  std::vector<std::size_t> pred_offset_;  // start of each predicate's tuples in code space
  std::vector<LitId> code_to_id_;
  std::vector<Literal> universe_;
  std::vector<std::size_t> lit_pred_;  // predicate index of each literal

  struct Slot {
    std::mutex mutex;
    bool ready = false;
    Block block;
  };
  std::unique_ptr<Slot[]> blocks_;
};

// Per-worker constraint store with clause-level caches. Status of a clause is
// brought up to date lazily when the clause is next visited.
class ConstraintIndex {
 public:
  explicit ConstraintIndex(std::shared_ptr<const ClauseSpace> space);

  // Returns false when the id is already present.
  bool add(const Constraint& c);
  std::size_t size() const { return count_; }
  bool contains(std::uint64_t id) const { return ids_.contains(id); }

  struct Status {
    std::uint32_t anchors_upto = 0, gen_upto = 0, red_upto = 0;
    bool banned = false;     // every hypothesis containing the clause violates a generalisation constraint
    bool redundant = false;  // subsumed by a clause of a redundancy anchor
    std::vector<std::uint32_t> sub;  // ascending anchor clauses that subsume it
    std::vector<std::pair<std::uint32_t, std::uint64_t>> gen;  // partial generalisation coverage
  };

  const Status& status(ClauseRef ref);
  // Full check of a hypothesis given as clause refs; statuses must be current.
  bool violated(std::span<const ClauseRef> h);

  const ClauseSpace& space() const { return *space_; }
  std::size_t anchor_count() const { return anchors_.size(); }

 private:
  // Distinct anchor clauses over all constraints.
  struct Anchor {
    FlatLiteral head;
    std::vector<FlatLiteral> body;
    std::uint64_t mask = 0;
    std::uint64_t lower_heads = 0;  // features it needs in a clause it subsumes
    std::uint64_t upper_heads = 0;  // features a clause subsuming it may have
    bool redundant = false;
  };
  struct Entry {
    std::vector<std::uint32_t> anchors;
    std::uint64_t full = 0;
  };

  std::uint32_t intern(const Clause& c);
  void refresh(Status& s, ClauseRef ref);
  bool spec_search(std::size_t i, const std::u32string& key);

  std::shared_ptr<const ClauseSpace> space_;
  std::vector<Anchor> anchors_;
  std::unordered_map<std::u32string, std::uint32_t> anchor_ids_;
  std::vector<Entry> gen_;
  // Every nonempty subset (up to max_clauses) of each specialisation
  // constraint's anchor set, sorted.
  std::unordered_set<std::u32string> spec_keys_;
  std::uint32_t red_count_ = 0;
  std::size_t count_ = 0;
  std::vector<const Status*> status_scratch_;
  std::unordered_set<std::uint64_t> ids_;
  std::vector<std::vector<Status>> status_;  // by body length
};

class Generator {
 public:
  // Standalone generator with its own clause space and constraint store.
  // Throws InvalidBias when m < 2 or no hypothesis of size m fits the bias.
  Generator(const Bias& bias, int m, std::span<const Constraint> cons, Heuristic heur);
  // Worker form: shares the clause space and the worker's persistent store.
  Generator(std::shared_ptr<ConstraintIndex> index, int m, Heuristic heur,
            std::stop_token stop = {});

  // Next hypothesis in canonical form, or nullopt once the slice is exhausted.
  // Throws Cancelled when stop is requested.
  std::optional<Hypothesis> next();
  void add_constraints(std::span<const Constraint> cs);

  int size() const { return m_; }
  ConstraintIndex& index() { return *index_; }
  // Complete clause tuples checked against the constraints so far.
  std::uint64_t leaves() const { return leaves_; }

 private:
  struct Frame {
    int remaining = 0;
    std::optional<ClauseRef> prev;
    bool shuffled = false;
    std::vector<ClauseRef> pool;  // used when shuffled
    std::size_t pos = 0;
    int len = 0;                   // current block when not shuffled
    std::uint32_t idx = 0;
    std::uint32_t end = 0;
  };

  void init();
  void open_frame(int remaining, std::optional<ClauseRef> prev);
  bool advance_block(Frame& f);
  std::optional<ClauseRef> pull(Frame& f);
  bool lengths_ok(int remaining, int len, std::size_t depth) const;
  std::uint32_t lower_rank(int len, const std::optional<ClauseRef>& prev);
  std::uint32_t clause_at(int len, std::uint32_t rank) const;
  bool leaf_ok();

  std::shared_ptr<ConstraintIndex> index_;
  const ClauseSpace* space_;
  int m_;
  Heuristic heur_;
  std::stop_token stop_;
  std::mt19937_64 rng_;
  std::vector<std::vector<std::uint32_t>> order_;  // seeded permutation per length (empty when seed 0)
  std::vector<std::vector<std::uint32_t>> rank_;
  std::vector<Frame> stack_;
  std::vector<ClauseRef> chosen_;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t ticks_ = 0;
  std::uint64_t leaves_ = 0;
};

}  // namespace lff
