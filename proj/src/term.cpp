#include "lff/term.hpp"

#include <algorithm>

namespace lff {

Term Term::int_list(const std::vector<int>& items) {
  List out;
  out.reserve(items.size());
  for (int v : items) out.push_back(integer(v));
  return list(std::move(out));
}

// Integers < atoms < lists; lists compare lexicographically.
std::strong_ordering compare(const Term& a, const Term& b) {
  if (a.value.index() != b.value.index()) return a.value.index() <=> b.value.index();
  if (a.is_int()) return a.as_int() <=> b.as_int();
  if (a.is_atom()) return std::get<Symbol>(a.value) <=> std::get<Symbol>(b.value);
  const auto& x = a.as_list();
  const auto& y = b.as_list();
  return std::lexicographical_compare_three_way(
      x.begin(), x.end(), y.begin(), y.end(),
      [](const Term& l, const Term& r) { return compare(l, r); });
}

}  // namespace lff
