#pragma once

#include <compare>
#include <cstdint>
#include <variant>
#include <vector>

#include "lff/hyplang.hpp"
#include "lff/symbol.hpp"

namespace lff {

// Ground term of example and fact arguments: integer, atom constant or list.
struct Term {
  using List = std::vector<Term>;
  std::variant<std::int64_t, Symbol, List> value;

  static Term integer(std::int64_t v) { return Term{v}; }
  static Term atom(std::string_view name) { return Term{Symbol(name)}; }
  static Term list(List items) { return Term{std::move(items)}; }
  static Term int_list(const std::vector<int>& items);

  bool is_int() const { return std::holds_alternative<std::int64_t>(value); }
  bool is_atom() const { return std::holds_alternative<Symbol>(value); }
  bool is_list() const { return std::holds_alternative<List>(value); }
  std::int64_t as_int() const { return std::get<std::int64_t>(value); }
  const List& as_list() const { return std::get<List>(value); }

  friend bool operator==(const Term&, const Term&) = default;
};

std::strong_ordering compare(const Term& a, const Term& b);

// A ground atom; examples and background facts both use this shape.
struct GroundAtom {
  PredSig pred;
  std::vector<Term> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
};

using Example = GroundAtom;

}  // namespace lff
