#pragma once

// Task files and the generated list-synthesis tasks.
//
// Task file grammar, one directive per line, each ending in '.', '%' starts a
// comment:
//   name last.                 pos last([4,7,9],9).     neg last([4,7,9],7).
//   fact beats(paper,rock).    builtin head.            relation score/3.
//   head last/2.               body tail/2.             max_clauses 2.
//   max_body 3.                max_vars 4.              recursion on.
//   max_size 7.                max_depth 200.           max_steps 100000.
//   timeout 300.               constraint specialisation last(A,B) :- head(A,B).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/solve.hpp"

namespace lff {

// Syntax errors throw ParseError with the line number; semantic errors throw
// TaskError.
TaskSpec parse_task(std::string_view text);
TaskSpec load_task(const std::filesystem::path& path);

// Canonical text form; parse_task(write_task(t)) reproduces t.
std::string write_task(const TaskSpec& task);

inline constexpr int kSynthesisExamples = 10;  // per polarity
inline constexpr int kMaxListLength = 50;
inline constexpr int kMaxElement = 100;

const std::vector<std::string>& synthesis_tasks();  // find_dupl, sorted, dropk, filter

// Throws TaskError on an unknown name. Deterministic in (name, seed).
TaskSpec gen_synthesis_task(std::string_view name, std::uint64_t seed);

// Hand-written target program of a synthesis task.
Hypothesis reference_solution(std::string_view name);

// Whether the target relation holds for the example.
bool ground_truth(std::string_view name, const Example& e);

}  // namespace lff
