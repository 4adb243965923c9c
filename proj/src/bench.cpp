#include "lff/bench.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "lff/error.hpp"
#include "lff/task.hpp"

namespace lff {

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::seq: return "seq";
    case SolverKind::portfolio: return "portfolio";
    case SolverKind::dac: return "dac";
  }
  return "?";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "seq") return SolverKind::seq;
  if (name == "portfolio") return SolverKind::portfolio;
  if (name == "dac") return SolverKind::dac;
  throw Error("unknown solver '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw Error("repeats must be at least 1");
  if (cfg.timeout.count() <= 0) throw Error("timeout must be positive");
  if (cfg.workers < 1) throw Error("workers must be at least 1");
}

TaskSpec prepare_task(const ExperimentConfig& cfg) {
  TaskSpec t = cfg.task ? *cfg.task : load_task(cfg.task_path);
  if (cfg.max_clauses) t.bias.max_clauses = *cfg.max_clauses;
  if (cfg.max_body) t.bias.max_body = *cfg.max_body;
  if (cfg.max_vars) t.bias.max_vars = *cfg.max_vars;
  if (cfg.max_size) t.max_size = *cfg.max_size;
  if (cfg.limits) t.limits = *cfg.limits;
  t.timeout = cfg.timeout;
  validate(t);
  return t;
}

SolveResult run_solver(const TaskSpec& task, SolverKind solver, int workers, bool comm,
                       std::uint64_t seed, bool record_log) {
  SolveOptions opts;
  opts.seed_base = seed;
  opts.record_log = record_log;
  switch (solver) {
    case SolverKind::seq: return solve_sequential(task, Heuristic{seed, 0.0}, opts);
    case SolverKind::portfolio: return run_portfolio(task, workers, comm, opts);
    case SolverKind::dac: return run_dac(task, workers, comm, opts);
  }
  throw Error("unknown solver");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  TaskSpec task = prepare_task(cfg);
  ResultRow row;
  row.task = task.name;
  row.solver = cfg.solver;
  row.workers = cfg.solver == SolverKind::seq ? 1 : cfg.workers;
  row.comm = cfg.solver != SolverKind::seq && cfg.comm;

  std::vector<double> solved_times;
  double cost_sum = 0;
  for (int r = 0; r < cfg.repeats; ++r) {
    SolveResult res = run_solver(task, cfg.solver, row.workers, row.comm,
                                 cfg.seed + static_cast<std::uint64_t>(r));
    double t = res.wall_seconds;
    row.times.push_back(t);
    row.solved_runs.push_back(res.solution.has_value());
    row.tested.push_back(res.total_tested());
    if (res.solution) {
      solved_times.push_back(t);
      cost_sum += static_cast<double>(cost(*res.solution));
    }
  }
  row.solved = static_cast<double>(solved_times.size()) / cfg.repeats;
  if (!solved_times.empty()) {
    double n = static_cast<double>(solved_times.size());
    double mean = std::accumulate(solved_times.begin(), solved_times.end(), 0.0) / n;
    double ss = 0;
    for (double x : solved_times) ss += (x - mean) * (x - mean);
    row.mean_time = mean;
    row.std_time = solved_times.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    row.mean_cost = cost_sum / n;
  }
  return {row};
}

std::string_view csv_header() { return "task,solver,workers,comm,mean_time,std_time,solved,mean_cost"; }

std::string to_csv(const ResultRow& row) {
  auto num = [](std::optional<double> v, const char* fmt) {
    if (!v) return std::string("NaN");
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  return row.task + ',' + std::string(to_string(row.solver)) + ',' + std::to_string(row.workers) +
         ',' + (row.comm ? "true" : "false") + ',' + num(row.mean_time, "%.6f") + ',' +
         num(row.std_time, "%.6f") + ',' + num(row.solved, "%.2f") + ',' +
         num(row.mean_cost, "%.2f");
}

}  // namespace lff
