#include "foarith/symbol.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace foarith {

struct SymbolTable::Impl {
  mutable std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string_view, uint32_t> ids;
};

SymbolTable::SymbolTable() : impl_(new Impl) {}

uint32_t SymbolTable::intern(std::string_view name) {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->ids.find(name);
  if (it != impl_->ids.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(impl_->names.size());
  impl_->names.emplace_back(name);
  impl_->ids.emplace(impl_->names.back(), id);
  return id;
}

const std::string& SymbolTable::name(uint32_t id) const {
  std::lock_guard lock(impl_->mu);
  return impl_->names.at(id);
}

uint32_t SymbolTable::size() const {
  std::lock_guard lock(impl_->mu);
  return static_cast<uint32_t>(impl_->names.size());
}

SymbolTable& SymbolTable::variables() {
  static SymbolTable table;
  return table;
}

SymbolTable& SymbolTable::relations() {
  static SymbolTable* table = [] {
    auto* t = new SymbolTable;
    t->intern("<");
    t->intern("+");
    t->intern("*");
    return t;
  }();
  return *table;
}

Rel Rel::less() {
  SymbolTable::relations();
  return Rel{0};
}

Rel Rel::plus() {
  SymbolTable::relations();
  return Rel{1};
}

Rel Rel::times() {
  SymbolTable::relations();
  return Rel{2};
}

bool Rel::builtin() const {
  SymbolTable::relations();
  return id < 3;
}

}  // namespace foarith
