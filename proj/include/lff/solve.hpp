#pragma once

// Sequential, portfolio and divide-and-conquer solvers, and the queues their
// workers coordinate through.

#include <chrono>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "lff/generate.hpp"
#include "lff/hyplang.hpp"
#include "lff/outcome.hpp"
#include "lff/subsume.hpp"
#include "lff/tester.hpp"

namespace lff {

struct TaskSpec {
  std::string name;
  std::vector<Example> pos;
  std::vector<Example> neg;
  BKProgram bk;
  Bias bias;
  std::vector<Constraint> initial_constraints;
  int max_size = 0;  // 0 means the largest size the bias admits
  EvalLimits limits;
  std::chrono::milliseconds timeout{300000};

  int effective_max_size() const { return max_size > 0 ? max_size : bias.max_size(); }
};

// Throws TaskError (or InvalidBias) when the task cannot be searched: no
// positives, examples of another predicate, a body predicate with no
// definition, max_size < 2, non-positive timeout or limits.
void validate(const TaskSpec& task);

// Many-to-many constraint channel. Messages are kept in one shared log and
// every worker reads it through its own cursor, skipping what it sent.
class ConstraintQueue {
 public:
  explicit ConstraintQueue(int workers);

  void broadcast(std::span<const Constraint> cs, int sender);
  // Pending messages for the receiver, deduplicated by id. Never blocks.
  std::vector<Constraint> drain(int receiver);
  // Drops everything pending for the worker and stops delivering to it.
  void close(int worker);

 private:
  void trim();

  std::mutex mutex_;
  std::deque<std::pair<int, Constraint>> log_;
  std::uint64_t base_ = 0;  // log position of log_.front()
  std::vector<std::uint64_t> cursor_;
  std::vector<bool> open_;
};

// Hypothesis sizes still to search, handed out smallest first.
class SizeQueue {
 public:
  explicit SizeQueue(std::vector<int> sizes);

  std::optional<int> get();
  void put_back(int m);
  // Removes every size >= m.
  void drop_from(int m);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::set<int> sizes_;
};

struct WorkerStats {
  std::uint64_t generated = 0;
  std::uint64_t tested = 0;
  std::uint64_t derived = 0;   // constraints derived from own failures
  std::uint64_t received = 0;  // messages drained from the queue
  std::uint64_t applied = 0;   // received constraints that were new to the store
  std::uint64_t steps = 0;     // resolution steps spent testing
};

struct TestRecord {
  int worker = 0;
  int size = 0;
  std::uint64_t id = 0;
  Outcome outcome;
  std::uint64_t constraints = 0;  // store size after constraining
};

enum class SliceEvent : std::uint8_t { started, exhausted, solved, cancelled, failed };
std::string_view to_string(SliceEvent e);

struct Event {
  double time = 0;  // seconds since the solve started
  int worker = 0;
  int size = 0;
  SliceEvent kind = SliceEvent::started;
};

struct SolutionReport {
  int worker = 0;
  int size = 0;
  std::string text;
  double time = 0;
};

struct SolveResult {
  std::optional<Hypothesis> solution;
  std::optional<SolutionReport> report;
  bool timed_out = false;
  std::vector<WorkerStats> workers;
  std::vector<TestRecord> log;  // grouped by worker, in test order within a worker
  std::vector<Event> events;    // in time order
  double wall_seconds = 0;

  std::uint64_t total_tested() const;
  std::uint64_t total_generated() const;
};

struct SolveOptions {
  std::uint64_t seed_base = 0;  // worker i of a parallel solver uses seed seed_base + i
  double random_freq = 0.01;
  bool record_log = true;
  std::stop_token stop;  // external cancellation, reported like a timeout
};

SolveResult solve_sequential(const TaskSpec& task, const Heuristic& heur,
                             const SolveOptions& opts = {});
SolveResult run_portfolio(const TaskSpec& task, int k, bool comm, const SolveOptions& opts = {});
SolveResult run_dac(const TaskSpec& task, int k, bool comm, const SolveOptions& opts = {});

// One line per tested hypothesis: `worker size id completeness/consistency constraints`.
std::string format_log(const SolveResult& r);

}  // namespace lff
