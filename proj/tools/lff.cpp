#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lff/bench.hpp"
#include "lff/error.hpp"
#include "lff/syntax.hpp"
#include "lff/task.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);)
    if (!part.empty()) out.push_back(part);
  return out;
}

lff::EvalLimits parse_limits(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw lff::Error("--limits expects depth,steps");
  return {std::stoi(parts[0]), std::stoi(parts[1])};
}

std::chrono::milliseconds to_ms(double secs) {
  return std::chrono::milliseconds(static_cast<long long>(secs * 1000.0 + 0.5));
}

struct Variant {
  lff::SolverKind solver;
  bool comm;
};

Variant parse_variant(const std::string& name) {
  if (name == "seq") return {lff::SolverKind::seq, false};
  if (name == "portfolio") return {lff::SolverKind::portfolio, false};
  if (name == "portfolio_comm") return {lff::SolverKind::portfolio, true};
  if (name == "dac") return {lff::SolverKind::dac, false};
  if (name == "dac_comm") return {lff::SolverKind::dac, true};
  throw lff::Error("unknown solver variant '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lff: parallel learning from failures"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "search for an optimal program for a task file");
  std::string task_path, solver_name = "seq", limits_arg, log_path;
  int workers = 1, max_size = 0;
  bool comm = false;
  double timeout = 300;
  std::uint64_t seed = 0;
  solve->add_option("--task", task_path, "task file")->required();
  solve->add_option("--solver", solver_name, "seq, portfolio or dac")
      ->check(CLI::IsMember({"seq", "portfolio", "dac"}));
  solve->add_option("--workers", workers, "number of workers")->check(CLI::PositiveNumber);
  solve->add_flag("--comm", comm, "share constraints between workers");
  solve->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
  solve->add_option("--max-size", max_size, "largest hypothesis size");
  solve->add_option("--seed", seed, "heuristic seed");
  solve->add_option("--limits", limits_arg, "depth,steps");
  solve->add_option("--log", log_path, "write the tested-hypothesis log here ('-' for stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "timed runs written as CSV");
  std::string suite, bench_task, sweep = "1,2,4,8", variants = "seq,portfolio,portfolio_comm,dac,dac_comm",
                                out_path;
  int repeats = lff::kDefaultRepeats;
  double bench_timeout = lff::kDefaultTimeout.count() / 1000.0;
  std::uint64_t bench_seed = 0;
  auto* suite_opt = bench->add_option("--suite", suite, "task suite")->check(CLI::IsMember({"synthesis"}));
  bench->add_option("--task", bench_task, "single task file")->excludes(suite_opt);
  bench->add_option("--workers-sweep", sweep, "comma-separated worker counts");
  bench->add_option("--solvers", variants, "seq,portfolio,portfolio_comm,dac,dac_comm");
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  bench->add_option("--timeout", bench_timeout, "seconds per run")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "seed of the first repeat and of generated tasks");
  bench->add_option("--out", out_path, "CSV output file (stdout when absent)");

  // gen-task
  auto* gen = app.add_subcommand("gen-task", "write a generated synthesis task file");
  std::string gen_name, gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("name", gen_name, "find_dupl, sorted, dropk or filter")->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      lff::ExperimentConfig cfg;
      cfg.task_path = task_path;
      cfg.timeout = to_ms(timeout);
      if (max_size > 0) cfg.max_size = max_size;
      if (!limits_arg.empty()) cfg.limits = parse_limits(limits_arg);
      lff::TaskSpec task = lff::prepare_task(cfg);
      auto kind = lff::parse_solver(solver_name);
      lff::SolveResult r = lff::run_solver(task, kind, workers, comm, seed, !log_path.empty());
      if (log_path == "-") {
        std::cout << lff::format_log(r);
      } else if (!log_path.empty()) {
        std::ofstream log(log_path, std::ios::binary);
        log << lff::format_log(r);
        if (!log) throw lff::Error("cannot write " + log_path);
      }
      std::fprintf(stderr, "tested %llu, time %.3fs%s\n",
                   static_cast<unsigned long long>(r.total_tested()), r.wall_seconds,
                   r.timed_out ? ", timed out" : "");
      if (!r.solution) {
        std::fprintf(stderr, "no solution\n");
        return 1;
      }
      if (log_path != "-") std::cout << lff::to_text(*r.solution) << '\n';
      std::fprintf(stderr, "cost %zu\n", lff::cost(*r.solution));
      return 0;
    }

    if (*bench) {
      if (suite.empty() && bench_task.empty()) throw lff::Error("bench needs --suite or --task");
      std::vector<lff::TaskSpec> tasks;
      if (!bench_task.empty()) {
        tasks.push_back(lff::load_task(bench_task));
      } else {
        for (const auto& name : lff::synthesis_tasks())
          tasks.push_back(lff::gen_synthesis_task(name, bench_seed));
      }
      std::vector<int> counts;
      for (const auto& s : split(sweep, ',')) counts.push_back(std::stoi(s));
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw lff::Error("cannot write " + out_path);
      }
      std::ostream& out = out_path.empty() ? std::cout : file;
      out << lff::csv_header() << '\n' << std::flush;
      for (const auto& task : tasks) {
        for (const auto& vname : split(variants, ',')) {
          Variant v = parse_variant(vname);
          std::vector<int> ks = v.solver == lff::SolverKind::seq ? std::vector<int>{1} : counts;
          for (int k : ks) {
            lff::ExperimentConfig cfg;
            cfg.task = task;
            cfg.solver = v.solver;
            cfg.workers = k;
            cfg.comm = v.comm;
            cfg.repeats = repeats;
            cfg.timeout = to_ms(bench_timeout);
            cfg.seed = bench_seed;
            for (const auto& row : lff::run_experiment(cfg)) out << lff::to_csv(row) << '\n' << std::flush;
          }
        }
      }
      return 0;
    }

    if (*gen) {
      std::string text = lff::write_task(lff::gen_synthesis_task(gen_name, gen_seed));
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(gen_out, std::ios::binary);
        f << text;
        if (!f) throw lff::Error("cannot write " + gen_out);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
