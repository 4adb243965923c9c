#include "lff/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace lff {
namespace {

struct SymbolTable {
  SymbolTable() { ids.emplace(names.emplace_back(), 0); }

  std::shared_mutex mutex;
  std::deque<std::string> names;  // element addresses are stable under push_back
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol::Symbol(std::string_view text) {
  auto& t = table();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(text); it != t.ids.end()) {
      id_ = it->second;
      return;
    }
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(text); it != t.ids.end()) {
    id_ = it->second;
    return;
  }
  id_ = static_cast<std::uint32_t>(t.names.size());
  const std::string& stored = t.names.emplace_back(text);
  t.ids.emplace(stored, id_);
}

Symbol Symbol::from_id(std::uint32_t id) {
  auto& t = table();
  std::shared_lock lock(t.mutex);
  if (id >= t.names.size()) throw std::out_of_range("unknown symbol id");
  Symbol s;
  s.id_ = id;
  return s;
}

const std::string& Symbol::str() const {
  auto& t = table();
  std::shared_lock lock(t.mutex);
  return t.names[id_];
}

std::strong_ordering operator<=>(Symbol a, Symbol b) {
  if (a.id_ == b.id_) return std::strong_ordering::equal;
  return a.str().compare(b.str()) <=> 0;
}

}  // namespace lff
