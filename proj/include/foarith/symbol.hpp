#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace foarith {

// Process-wide interning of variable and relation names. Ids are dense and
// stable for the lifetime of the process.
class SymbolTable {
 public:
  uint32_t intern(std::string_view name);
  const std::string& name(uint32_t id) const;
  uint32_t size() const;

  static SymbolTable& variables();
  static SymbolTable& relations();

 private:
  struct Impl;
  SymbolTable();
  Impl* impl_;
};

struct Var {
  uint32_t id = 0;

  static Var named(std::string_view name) { return Var{SymbolTable::variables().intern(name)}; }
  const std::string& name() const { return SymbolTable::variables().name(id); }

  friend bool operator==(Var a, Var b) { return a.id == b.id; }
  friend bool operator!=(Var a, Var b) { return a.id != b.id; }
  friend bool operator<(Var a, Var b) { return a.id < b.id; }
};

struct Rel {
  uint32_t id = 0;

  static Rel named(std::string_view name) { return Rel{SymbolTable::relations().intern(name)}; }
  const std::string& name() const { return SymbolTable::relations().name(id); }

  static Rel less();
  static Rel plus();
  static Rel times();
  bool builtin() const;

  friend bool operator==(Rel a, Rel b) { return a.id == b.id; }
  friend bool operator!=(Rel a, Rel b) { return a.id != b.id; }
  friend bool operator<(Rel a, Rel b) { return a.id < b.id; }
};

}  // namespace foarith

template <>
struct std::hash<foarith::Var> {
  size_t operator()(foarith::Var v) const noexcept { return v.id; }
};

template <>
struct std::hash<foarith::Rel> {
  size_t operator()(foarith::Rel r) const noexcept { return r.id; }
};
