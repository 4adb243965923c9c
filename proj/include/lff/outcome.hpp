#pragma once

#include <cstdint>
#include <string>

namespace lff {

enum class Completeness : std::uint8_t { complete, incomplete, totally_incomplete };
enum class Consistency : std::uint8_t { consistent, inconsistent };

// Result of testing a hypothesis. totally_incomplete is the strong form of
// incomplete: every check for "incomplete" must also accept it.
struct Outcome {
  Completeness completeness = Completeness::complete;
  Consistency consistency = Consistency::consistent;

  bool is_solution() const {
    return completeness == Completeness::complete && consistency == Consistency::consistent;
  }
  bool is_incomplete() const { return completeness != Completeness::complete; }
  bool is_inconsistent() const { return consistency == Consistency::inconsistent; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string to_string(Completeness c);
std::string to_string(Consistency c);
std::string to_string(const Outcome& o);  // "incomplete/consistent"

}  // namespace lff
