#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "foarith/symbol.hpp"

namespace foarith {

struct RelationDecl {
  Rel rel;
  uint32_t arity;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<RelationDecl> relations, uint32_t constant_budget);

  void add(Rel rel, uint32_t arity);
  void add(std::string_view name, uint32_t arity) { add(Rel::named(name), arity); }

  // Arity of a relation, built-ins included.
  std::optional<uint32_t> arity(Rel rel) const;
  const std::vector<RelationDecl>& relations() const { return relations_; }

  uint32_t constant_budget = 0;

 private:
  std::vector<RelationDecl> relations_;
};

// Tuple set over {0..n-1}^arity with dense or hashed membership and, for
// arity <= 2, per-element adjacency used by guarded quantifier iteration.
class RelationData {
 public:
  RelationData(uint32_t n, uint32_t arity);

  uint32_t arity() const { return arity_; }
  size_t size() const { return flat_.size() / (arity_ ? arity_ : 1); }
  bool contains(std::span<const uint32_t> t) const;
  bool insert(std::span<const uint32_t> t);
  std::span<const uint32_t> tuple(size_t i) const { return {flat_.data() + i * arity_, arity_}; }

  // For a binary relation: elements b with R(a,b) (pos 1 free) or R(b,a)
  // (pos 0 free). For a unary relation: members.
  std::span<const uint32_t> candidates(uint32_t free_pos, uint32_t other) const;

 private:
  uint64_t key(std::span<const uint32_t> t) const;

  uint32_t n_;
  uint32_t arity_;
  std::vector<uint32_t> flat_;
  std::vector<uint64_t> bits_;
  std::unordered_set<uint64_t> sparse_;
  bool dense_ = false;
  std::vector<std::vector<uint32_t>> out_, in_;
};

class ArithStructure {
 public:
  explicit ArithStructure(uint32_t n);
  ArithStructure(const ArithStructure& other);
  ArithStructure& operator=(const ArithStructure& other);
  ArithStructure(ArithStructure&&) noexcept = default;
  ArithStructure& operator=(ArithStructure&&) noexcept = default;

  uint32_t size() const { return n_; }
  uint32_t constant(uint32_t index) const { return index < n_ ? index : n_ - 1; }

  void declare(Rel rel, uint32_t arity);
  void declare(std::string_view name, uint32_t arity) { declare(Rel::named(name), arity); }
  void add(Rel rel, std::span<const uint32_t> tuple);
  void add(Rel rel, std::initializer_list<uint32_t> tuple) { add(rel, std::span<const uint32_t>(tuple.begin(), tuple.size())); }
  void add(std::string_view name, std::initializer_list<uint32_t> tuple) { add(Rel::named(name), tuple); }

  // Replace a built-in's arithmetic meaning by an explicit tuple set. Only
  // used for disjoint unions, whose + and x are unions of local relations.
  void override_builtin(Rel rel);
  bool overridden(Rel rel) const;

  bool holds(Rel rel, std::span<const uint32_t> args) const;
  bool has(Rel rel) const;
  const RelationData* relation(Rel rel) const;
  // Non-built-in relations (and built-in overrides) in declaration order.
  const std::vector<RelationDecl>& declared() const { return decls_; }
  Vocabulary vocabulary(uint32_t constant_budget = 0) const;

 private:
  uint32_t n_;
  std::vector<RelationDecl> decls_;
  std::vector<std::unique_ptr<RelationData>> by_id_;
};

bool builtin_holds(Rel rel, uint32_t n, std::span<const uint32_t> args);

bool operator==(const ArithStructure& a, const ArithStructure& b);

ArithStructure read_structure(std::istream& in);
ArithStructure parse_structure(const std::string& text);
void write_structure(std::ostream& out, const ArithStructure& a);
std::string format_structure(const ArithStructure& a);

// Undirected simple graph on {0..n-1} as a structure with symmetric E.
ArithStructure graph_structure(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                               std::string_view rel = "E");

}  // namespace foarith
