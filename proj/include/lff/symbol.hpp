#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lff {

// Interned identifier shared by predicate names and atom constants.
//
// Ids are process-wide and never recycled. Ordering compares the text, so
// sorted output does not depend on the order in which symbols were interned.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);
  // Throws std::out_of_range for an id that was never issued.
  static Symbol from_id(std::uint32_t id);

  std::uint32_t id() const { return id_; }
  const std::string& str() const;

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b);

 private:
  std::uint32_t id_ = 0;  // 0 is the empty string
};

}  // namespace lff
