#pragma once

// Timed experiment runs and CSV reporting.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lff/solve.hpp"

namespace lff {

enum class SolverKind : std::uint8_t { seq, portfolio, dac };
std::string_view to_string(SolverKind s);
// Throws Error on an unknown name.
SolverKind parse_solver(std::string_view name);

inline constexpr int kDefaultRepeats = 5;
inline constexpr std::chrono::milliseconds kDefaultTimeout{300000};

struct ExperimentConfig {
  std::string task_path;         // loaded when task is not given
  std::optional<TaskSpec> task;  // already loaded or generated
  SolverKind solver = SolverKind::seq;
  int workers = 1;
  bool comm = false;
  int repeats = kDefaultRepeats;
  std::chrono::milliseconds timeout = kDefaultTimeout;
  std::uint64_t seed = 0;
  // Overrides applied on top of the task.
  std::optional<int> max_clauses, max_body, max_vars, max_size;
  std::optional<EvalLimits> limits;
};

// Throws Error unless repeats >= 1, timeout > 0 and workers >= 1.
void validate(const ExperimentConfig& cfg);

// The task with the config's overrides and timeout applied.
TaskSpec prepare_task(const ExperimentConfig& cfg);

// One run. Seq uses Heuristic{seed, 0}; parallel workers use seeds seed + i.
SolveResult run_solver(const TaskSpec& task, SolverKind solver, int workers, bool comm,
                       std::uint64_t seed, bool record_log = false);

struct ResultRow {
  std::string task;
  SolverKind solver = SolverKind::seq;
  int workers = 1;
  bool comm = false;
  std::optional<double> mean_time;  // over solved runs only
  double std_time = 0;
  double solved = 0;  // fraction of repeats
  std::optional<double> mean_cost;

  // Per-repeat raw data.
  std::vector<double> times;
  std::vector<bool> solved_runs;
  std::vector<std::uint64_t> tested;
};

// Repeat r runs with seed cfg.seed + r; repeats run one after another.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string_view csv_header();  // task,solver,workers,comm,mean_time,std_time,solved,mean_cost
std::string to_csv(const ResultRow& row);  // unsolved means print as NaN

}  // namespace lff
