#include "lff/solve.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "lff/error.hpp"
#include "lff/syntax.hpp"

namespace lff {

void validate(const TaskSpec& task) {
  validate(task.bias);
  validate(task.limits);
  if (task.pos.empty()) throw TaskError("task has no positive examples");
  for (const auto* set : {&task.pos, &task.neg})
    for (const auto& e : *set)
      if (e.pred != task.bias.head)
        throw TaskError("example " + to_text(e) + " does not match head " +
                        to_string(task.bias.head));
  if (task.effective_max_size() < 2) throw TaskError("max_size must be at least 2");
  if (task.timeout.count() <= 0) throw TaskError("timeout must be positive");
  for (const auto& p : task.bias.callable()) {
    if (p == task.bias.head) continue;
    bool known = std::any_of(task.bk.facts.begin(), task.bk.facts.end(),
                             [&](const GroundAtom& f) { return f.pred == p; }) ||
                 std::find(task.bk.relations.begin(), task.bk.relations.end(), p) !=
                     task.bk.relations.end();
    if (!known) {
      auto b = parse_builtin(p.name.str());
      known = b && task.bk.builtins.contains(*b) && signature(*b).arity == p.arity;
    }
    if (!known) throw TaskError("body predicate " + to_string(p) + " has no definition");
  }
}

ConstraintQueue::ConstraintQueue(int workers)
    : cursor_(static_cast<std::size_t>(workers), 0), open_(static_cast<std::size_t>(workers), true) {}

void ConstraintQueue::broadcast(std::span<const Constraint> cs, int sender) {
  if (cs.empty()) return;
  std::lock_guard lock(mutex_);
  bool anyone = false;
  for (std::size_t w = 0; w < open_.size(); ++w)
    if (open_[w] && static_cast<int>(w) != sender) anyone = true;
  if (!anyone) return;
  for (const auto& c : cs) log_.emplace_back(sender, c);
}

std::vector<Constraint> ConstraintQueue::drain(int receiver) {
  std::vector<Constraint> out;
  std::lock_guard lock(mutex_);
  auto w = static_cast<std::size_t>(receiver);
  if (w >= open_.size() || !open_[w]) return out;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = cursor_[w]; i < base_ + log_.size(); ++i) {
    const auto& [sender, c] = log_[i - base_];
    if (sender != receiver && seen.insert(c.id).second) out.push_back(c);
  }
  cursor_[w] = base_ + log_.size();
  trim();
  return out;
}

void ConstraintQueue::close(int worker) {
  std::lock_guard lock(mutex_);
  auto w = static_cast<std::size_t>(worker);
  if (w >= open_.size()) return;
  open_[w] = false;
  trim();
}

void ConstraintQueue::trim() {
  std::uint64_t low = base_ + log_.size();
  for (std::size_t w = 0; w < open_.size(); ++w)
    if (open_[w]) low = std::min(low, cursor_[w]);
  while (base_ < low) {
    log_.pop_front();
    ++base_;
  }
}

SizeQueue::SizeQueue(std::vector<int> sizes) : sizes_(sizes.begin(), sizes.end()) {}

std::optional<int> SizeQueue::get() {
  std::lock_guard lock(mutex_);
  if (sizes_.empty()) return std::nullopt;
  int m = *sizes_.begin();
  sizes_.erase(sizes_.begin());
  return m;
}

void SizeQueue::put_back(int m) {
  std::lock_guard lock(mutex_);
  sizes_.insert(m);
}

void SizeQueue::drop_from(int m) {
  std::lock_guard lock(mutex_);
  sizes_.erase(sizes_.lower_bound(m), sizes_.end());
}

std::size_t SizeQueue::size() const {
  std::lock_guard lock(mutex_);
  return sizes_.size();
}

std::string_view to_string(SliceEvent e) {
  switch (e) {
    case SliceEvent::started: return "started";
    case SliceEvent::exhausted: return "exhausted";
    case SliceEvent::solved: return "solved";
    case SliceEvent::cancelled: return "cancelled";
    case SliceEvent::failed: return "failed";
  }
  return "?";
}

std::uint64_t SolveResult::total_tested() const {
  std::uint64_t n = 0;
  for (const auto& w : workers) n += w.tested;
  return n;
}

std::uint64_t SolveResult::total_generated() const {
  std::uint64_t n = 0;
  for (const auto& w : workers) n += w.generated;
  return n;
}

std::string format_log(const SolveResult& r) {
  std::ostringstream out;
  for (const auto& t : r.log)
    out << t.worker << ' ' << t.size << ' ' << hex_id(t.id) << ' ' << to_string(t.outcome) << ' '
        << t.constraints << '\n';
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

enum class Plan { deepening, shared_sizes };

// A failing slice is retried once on the queue before the run is aborted.
constexpr int kMaxSliceFailures = 2;

struct Run {
  Run(const TaskSpec& t, int k, bool c, Plan p, std::vector<int> reachable)
      : task(t),
        comm(c),
        plan(p),
        cons(k),
        sizes(reachable),
        reachable(std::move(reachable)),
        slice(static_cast<std::size_t>(k)),
        current(static_cast<std::size_t>(k), 0),
        stats(static_cast<std::size_t>(k)),
        logs(static_cast<std::size_t>(k)) {}

  const TaskSpec& task;
  bool comm;
  Plan plan;
  bool record_log = true;
  std::shared_ptr<const BKProgram> bk;
  std::shared_ptr<const ClauseSpace> space;
  Clock::time_point start;
  ConstraintQueue cons;
  SizeQueue sizes;
  std::vector<int> reachable;

  std::mutex mutex;
  std::condition_variable cv;
  std::stop_source global;
  std::vector<Event> events;
  std::vector<std::stop_source> slice;
  std::vector<int> current;
  std::set<int> exhausted;
  std::map<int, int> failures;
  std::optional<SolutionReport> best;
  std::optional<Hypothesis> best_h;
  int finished_workers = 0;
  std::exception_ptr error;

  std::vector<WorkerStats> stats;
  std::vector<std::vector<TestRecord>> logs;

  double now() const { return std::chrono::duration<double>(Clock::now() - start).count(); }

  void event(int worker, int size, SliceEvent kind) {
    events.push_back({now(), worker, size, kind});
  }
};

// Searches one size slice; returns the solution if one is found.
std::optional<Hypothesis> search_slice(Run& run, int id, int m, const Heuristic& heur,
                                       const std::shared_ptr<ConstraintIndex>& index, Tester& tester,
                                       std::stop_token stop) {
  WorkerStats& st = run.stats[static_cast<std::size_t>(id)];
  auto absorb = [&] {
    if (!run.comm) return;
    for (const auto& c : run.cons.drain(id)) {
      ++st.received;
      if (index->add(c)) ++st.applied;
    }
  };
  Generator gen(index, m, heur, stop);
  while (true) {
    absorb();
    auto h = gen.next();
    if (!h) return std::nullopt;
    ++st.generated;
    Outcome o = tester.test(*h, stop);
    ++st.tested;
    st.steps = tester.counters().steps;
    if (o.is_solution()) {
      if (run.record_log)
        run.logs[static_cast<std::size_t>(id)].push_back(
            {id, m, hypothesis_id(*h), o, static_cast<std::uint64_t>(index->size())});
      return h;
    }
    auto cs = derive_constraints(*h, o);
    for (const auto& c : cs)
      if (index->add(c)) ++st.derived;
    if (run.record_log)
      run.logs[static_cast<std::size_t>(id)].push_back(
          {id, m, hypothesis_id(*h), o, static_cast<std::uint64_t>(index->size())});
    if (run.comm) run.cons.broadcast(cs, id);
  }
}

void report_solution(Run& run, int id, int m, Hypothesis h) {
  std::lock_guard lock(run.mutex);
  run.event(id, m, SliceEvent::solved);
  if (run.best && run.best->size <= m) return;
  run.best = SolutionReport{id, m, to_text(h), run.now()};
  run.best_h = std::move(h);
  if (run.plan == Plan::shared_sizes) {
    run.sizes.drop_from(m);
    for (std::size_t w = 0; w < run.current.size(); ++w)
      if (run.current[w] > m) run.slice[w].request_stop();
  }
  run.cv.notify_all();
}

void worker(Run& run, int id, Heuristic heur) {
  try {
    auto index = std::make_shared<ConstraintIndex>(run.space);
    for (const auto& c : run.task.initial_constraints) index->add(c);
    Tester tester(run.bk, run.task.pos, run.task.neg, run.task.limits);
    std::size_t next = 0;
    while (!run.global.stop_requested()) {
      std::optional<int> m;
      if (run.plan == Plan::deepening) {
        if (next < run.reachable.size()) m = run.reachable[next++];
      } else {
        m = run.sizes.get();
      }
      if (!m) break;
      std::stop_source slice;
      {
        std::lock_guard lock(run.mutex);
        if (run.plan == Plan::shared_sizes && run.best && run.best->size <= *m) continue;
        run.slice[static_cast<std::size_t>(id)] = slice;
        run.current[static_cast<std::size_t>(id)] = *m;
        run.event(id, *m, SliceEvent::started);
      }
      std::stop_callback link(run.global.get_token(), [&slice] { slice.request_stop(); });
      SliceEvent end = SliceEvent::exhausted;
      std::optional<Hypothesis> found;
      try {
        found = search_slice(run, id, *m, heur, index, tester, slice.get_token());
        if (found) end = SliceEvent::solved;
      } catch (const Cancelled&) {
        end = SliceEvent::cancelled;
      } catch (...) {
        std::lock_guard lock(run.mutex);
        run.event(id, *m, SliceEvent::failed);
        run.current[static_cast<std::size_t>(id)] = 0;
        if (run.plan == Plan::shared_sizes && ++run.failures[*m] < kMaxSliceFailures) {
          run.sizes.put_back(*m);
          continue;
        }
        if (!run.error) run.error = std::current_exception();
        run.global.request_stop();
        run.cv.notify_all();
        break;
      }
      if (found) {
        {
          std::lock_guard lock(run.mutex);
          run.current[static_cast<std::size_t>(id)] = 0;
        }
        report_solution(run, id, *m, std::move(*found));
        if (run.plan == Plan::deepening) break;
        continue;
      }
      std::lock_guard lock(run.mutex);
      run.current[static_cast<std::size_t>(id)] = 0;
      run.event(id, *m, end);
      if (end == SliceEvent::exhausted) {
        run.exhausted.insert(*m);
        run.cv.notify_all();
      }
    }
  } catch (...) {
    std::lock_guard lock(run.mutex);
    if (!run.error) run.error = std::current_exception();
    run.global.request_stop();
  }
  run.cons.close(id);
  std::lock_guard lock(run.mutex);
  ++run.finished_workers;
  run.cv.notify_all();
}

SolveResult execute(const TaskSpec& task, int k, bool comm, Plan plan,
                    const std::vector<Heuristic>& heurs, const SolveOptions& opts) {
  validate(task);
  if (k < 1) throw Error("worker count must be at least 1");
  std::vector<int> reachable;
  for (int m = 2; m <= task.effective_max_size(); ++m)
    if (size_reachable(task.bias, m)) reachable.push_back(m);

  Run run(task, k, comm, plan, reachable);
  run.record_log = opts.record_log;
  run.bk = std::make_shared<const BKProgram>(task.bk);
  run.space = std::make_shared<const ClauseSpace>(task.bias);
  run.start = Clock::now();
  const auto deadline = run.start + task.timeout;

  // Done when a solution is known to be optimal or every worker has stopped.
  auto done = [&] {
    if (run.error || run.finished_workers == k) return true;
    if (!run.best) return false;
    if (plan == Plan::deepening) return true;
    for (int m : run.reachable)
      if (m < run.best->size && !run.exhausted.contains(m)) return false;
    return true;
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    threads.emplace_back(worker, std::ref(run), i, heurs[static_cast<std::size_t>(i)]);

  SolveResult result;
  {
    std::stop_callback wake(opts.stop, [&] {
      std::lock_guard lock(run.mutex);
      run.cv.notify_all();
    });
    std::unique_lock lock(run.mutex);
    while (!done()) {
      if (opts.stop.stop_requested() ||
          run.cv.wait_until(lock, deadline) == std::cv_status::timeout) {
        if (!done()) result.timed_out = true;
        break;
      }
    }
    if (!result.timed_out && run.best) {
      result.solution = run.best_h;
      result.report = run.best;
    }
    run.global.request_stop();
  }
  for (auto& t : threads) t.join();
  result.wall_seconds = run.now();
  if (run.error && !result.solution) std::rethrow_exception(run.error);

  result.workers = std::move(run.stats);
  for (auto& l : run.logs) result.log.insert(result.log.end(), l.begin(), l.end());
  result.events = std::move(run.events);
  return result;
}

}  // namespace

SolveResult solve_sequential(const TaskSpec& task, const Heuristic& heur, const SolveOptions& opts) {
  return execute(task, 1, false, Plan::deepening, {heur}, opts);
}

SolveResult run_portfolio(const TaskSpec& task, int k, bool comm, const SolveOptions& opts) {
  std::vector<Heuristic> heurs;
  for (int i = 0; i < k; ++i)
    heurs.push_back({opts.seed_base + static_cast<std::uint64_t>(i), opts.random_freq});
  return execute(task, k, comm, Plan::deepening, heurs, opts);
}

SolveResult run_dac(const TaskSpec& task, int k, bool comm, const SolveOptions& opts) {
  std::vector<Heuristic> heurs;
  for (int i = 0; i < k; ++i)
    heurs.push_back({opts.seed_base + static_cast<std::uint64_t>(i), opts.random_freq});
  return execute(task, k, comm, Plan::shared_sizes, heurs, opts);
}

}  // namespace lff
