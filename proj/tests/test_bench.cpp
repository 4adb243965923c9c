#include <doctest.h>

#include <cmath>

#include "lff/bench.hpp"
#include "lff/error.hpp"
#include "lff/task.hpp"
#include "oracle.hpp"

using namespace lff;

TEST_CASE("csv schema") {
  CHECK(csv_header() == "task,solver,workers,comm,mean_time,std_time,solved,mean_cost");
  ResultRow row;
  row.task = "t";
  row.solver = SolverKind::dac;
  row.workers = 4;
  row.comm = true;
  CHECK(to_csv(row) == "t,dac,4,true,NaN,0.000000,0.00,NaN");
  row.mean_time = 1.5;
  row.std_time = 0.25;
  row.solved = 1;
  row.mean_cost = 7;
  CHECK(to_csv(row) == "t,dac,4,true,1.500000,0.250000,1.00,7.00");
}

TEST_CASE("protocol defaults") {
  ExperimentConfig cfg;
  CHECK(cfg.repeats == 5);
  CHECK(cfg.timeout == std::chrono::seconds(300));
  CHECK(TaskSpec{}.timeout == std::chrono::seconds(300));
  CHECK(parse_solver("portfolio") == SolverKind::portfolio);
  CHECK_THROWS_AS(parse_solver("magic"), Error);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.task = gen_synthesis_task("sorted", 0);
  cfg.repeats = 0;
  CHECK_THROWS_AS(run_experiment(cfg), Error);
  cfg.repeats = 1;
  cfg.timeout = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(run_experiment(cfg), Error);
  cfg.timeout = std::chrono::milliseconds(10);
  cfg.workers = 0;
  cfg.solver = SolverKind::portfolio;
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("repeated sequential runs on a micro task") {
  ExperimentConfig cfg;
  cfg.task_path = std::string(LFF_TASK_DIR) + "/micro/member.task";
  cfg.repeats = 5;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  const ResultRow& r = rows[0];
  CHECK(r.task == "member");
  CHECK(r.solved == 1.0);
  REQUIRE(r.mean_cost);
  CHECK(*r.mean_cost == static_cast<double>(oracle::optimum(load_task(cfg.task_path))));
  REQUIRE(r.mean_time);
  CHECK(r.std_time >= 0);
  CHECK(r.times.size() == 5);
}

TEST_CASE("forced timeout is data, not an error") {
  ExperimentConfig cfg;
  cfg.task = gen_synthesis_task("filter", 1);
  cfg.repeats = 1;
  cfg.timeout = std::chrono::milliseconds(1);
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].solved == 0.0);
  CHECK_FALSE(rows[0].mean_time);
  CHECK(to_csv(rows[0]).find(",NaN,") != std::string::npos);
}

TEST_CASE("overrides reach the task") {
  ExperimentConfig cfg;
  cfg.task = gen_synthesis_task("dropk", 0);
  cfg.max_vars = 4;
  cfg.max_size = 6;
  cfg.limits = EvalLimits{30, 500};
  cfg.timeout = std::chrono::milliseconds(1234);
  TaskSpec t = prepare_task(cfg);
  CHECK(t.bias.max_vars == 4);
  CHECK(t.max_size == 6);
  CHECK(t.limits.max_steps == 500);
  CHECK(t.timeout == std::chrono::milliseconds(1234));
}
