#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foarith/symbol.hpp"

namespace foarith {

class ArithStructure;

struct Term {
  enum class Kind : uint8_t { Variable, Constant };
  Kind kind = Kind::Variable;
  uint32_t value = 0;

  static Term var(Var v) { return {Kind::Variable, v.id}; }
  static Term var(std::string_view name) { return var(Var::named(name)); }
  static Term constant(uint32_t index) { return {Kind::Constant, index}; }

  bool is_var() const { return kind == Kind::Variable; }
  Var as_var() const { return Var{value}; }

  friend bool operator==(const Term& a, const Term& b) { return a.kind == b.kind && a.value == b.value; }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
};

enum class Kind : uint8_t { Equal, Atom, Not, And, Or, Exists, Forall, Macro, BigOr, BigAnd };

class Node;
using Formula = std::shared_ptr<const Node>;

// Semantic evaluator for a macro; receives the values of the macro's
// argument terms. It must agree with the declared expansion, including
// the absence of overflowing + and * triples.
using MacroSemantics = std::function<bool(const ArithStructure&, std::span<const uint32_t>)>;

struct MacroSpec {
  std::string name;
  std::string params;
  std::vector<Term> args;
  std::shared_ptr<const MacroSemantics> semantics;
  Formula expansion;
};

// Finite, enumerable family of index tuples for BigOr/BigAnd.
class IndexFamily {
 public:
  virtual ~IndexFamily() = default;
  // nullopt when the size does not fit in 64 bits.
  virtual std::optional<uint64_t> size() const = 0;
  // Visits tuples in a fixed order; stops early when visit returns false.
  // Returns false iff stopped early.
  virtual bool for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const = 0;
  virtual std::string describe() const = 0;
  // Families whose children are costly to build are never materialized.
  virtual bool lazy() const { return false; }
};

class RangeFamily : public IndexFamily {
 public:
  explicit RangeFamily(uint32_t count) : count_(count) {}
  std::optional<uint64_t> size() const override { return count_; }
  bool for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const override;
  std::string describe() const override;

 private:
  uint32_t count_;
};

// Strictly increasing r-tuples over {0..universe-1}.
class CombinationFamily : public IndexFamily {
 public:
  CombinationFamily(uint32_t universe, uint32_t r) : universe_(universe), r_(r) {}
  std::optional<uint64_t> size() const override;
  bool for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const override;
  std::string describe() const override;

 private:
  uint32_t universe_, r_;
};

class ExplicitFamily : public IndexFamily {
 public:
  explicit ExplicitFamily(std::vector<std::vector<uint32_t>> tuples) : tuples_(std::move(tuples)) {}
  std::optional<uint64_t> size() const override { return tuples_.size(); }
  bool for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const override;
  std::string describe() const override;

 private:
  std::vector<std::vector<uint32_t>> tuples_;
};

using ChildGenerator = std::function<Formula(std::span<const uint32_t>)>;

// Quantifier guard: the bound variable only ranges over tuples of a stored
// relation, because the body is a conjunction with a positive atom on it
// (exists) or a disjunction with a negated one (forall).
struct Guard {
  bool present = false;
  Rel rel;
  uint32_t free_pos = 0;
  Term other;
  uint32_t arity = 0;
};

class Node {
 public:
  Kind kind() const { return kind_; }

  // Equal, Atom
  Rel relation() const { return rel_; }
  const std::vector<Term>& terms() const { return terms_; }
  // Not, And, Or; materialized BigOr/BigAnd
  const std::vector<Formula>& children() const { return children_; }
  // Exists, Forall
  Var bound() const { return bound_; }
  const Formula& body() const { return children_[0]; }
  // Macro
  const MacroSpec& macro() const { return *macro_; }
  // BigOr, BigAnd
  const IndexFamily& family() const { return *family_; }
  const ChildGenerator& generator() const { return generator_; }
  bool materialized() const { return materialized_; }
  bool uniform() const { return uniform_; }

  const std::vector<Var>& free_vars() const { return free_; }
  uint32_t rank() const { return rank_; }
  bool has_macro() const { return has_macro_; }
  bool has_big() const { return has_big_; }
  // 0: quantifier-free literal material, 1: macro, 2: quantified.
  uint8_t cost_class() const { return cost_; }
  // Evaluation order for And/Or children (cheap classes first).
  const std::vector<uint32_t>& order() const { return order_; }
  const Guard& guard() const { return guard_; }
  // Creation order; nodes born during an evaluation are not memoized.
  uint64_t serial() const { return serial_; }
  // Unfolded size of the stored (materialized) part, saturating.
  uint64_t footprint() const { return footprint_; }

 private:
  friend Formula eq(Term, Term);
  friend Formula atom(Rel, std::vector<Term>);
  friend Formula neg(Formula);
  friend Formula conj(std::vector<Formula>);
  friend Formula disj(std::vector<Formula>);
  friend Formula exists(Var, Formula);
  friend Formula forall(Var, Formula);
  friend Formula macro(MacroSpec);
  friend Formula big(Kind, std::shared_ptr<const IndexFamily>, ChildGenerator, bool);

  void analyze();

  Kind kind_ = Kind::And;
  Rel rel_;
  std::vector<Term> terms_;
  std::vector<Formula> children_;
  Var bound_;
  std::unique_ptr<MacroSpec> macro_;
  std::shared_ptr<const IndexFamily> family_;
  ChildGenerator generator_;
  bool materialized_ = false;
  bool uniform_ = false;

  std::vector<Var> free_;
  uint32_t rank_ = 0;
  bool has_macro_ = false;
  bool has_big_ = false;
  uint8_t cost_ = 0;
  std::vector<uint32_t> order_;
  Guard guard_;
  uint64_t serial_ = next_serial();
  uint64_t footprint_ = 1;

  static uint64_t next_serial();
};

// Serial the next node will receive.
uint64_t node_serial_watermark();

Formula eq(Term a, Term b);
Formula atom(Rel rel, std::vector<Term> args);
inline Formula atom(std::string_view rel, std::vector<Term> args) { return atom(Rel::named(rel), std::move(args)); }
Formula neg(Formula f);
Formula conj(std::vector<Formula> children);
Formula disj(std::vector<Formula> children);
Formula exists(Var v, Formula body);
Formula forall(Var v, Formula body);
Formula macro(MacroSpec spec);
// uniform: every child has the same rank, free variables and macro/big
// content, so the first child serves as a template for analysis.
Formula big(Kind kind, std::shared_ptr<const IndexFamily> family, ChildGenerator gen, bool uniform);
inline Formula big_or(std::shared_ptr<const IndexFamily> family, ChildGenerator gen, bool uniform = true) {
  return big(Kind::BigOr, std::move(family), std::move(gen), uniform);
}
inline Formula big_and(std::shared_ptr<const IndexFamily> family, ChildGenerator gen, bool uniform = true) {
  return big(Kind::BigAnd, std::move(family), std::move(gen), uniform);
}

inline Formula truth() { return conj({}); }
inline Formula falsity() { return disj({}); }
inline Formula implies(Formula a, Formula b) { return disj({neg(std::move(a)), std::move(b)}); }
inline Formula iff(Formula a, Formula b) { return conj({implies(a, b), implies(b, a)}); }
inline Formula exists(std::string_view v, Formula body) { return exists(Var::named(v), std::move(body)); }
inline Formula forall(std::string_view v, Formula body) { return forall(Var::named(v), std::move(body)); }
inline Formula less(Term a, Term b) { return atom(Rel::less(), {a, b}); }

// Visits the children of any node, streaming BigOr/BigAnd children that were
// not materialized. Stops when visit returns false; returns false iff stopped.
bool for_each_child(const Node& n, const std::function<bool(const Formula&)>& visit);

// Children above this count are streamed rather than stored. Initialized
// from FOARITH_BUDGET_NODES (default 100000).
uint64_t materialization_budget();
void set_materialization_budget(uint64_t budget);

uint32_t quantifier_rank(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);

}  // namespace foarith
