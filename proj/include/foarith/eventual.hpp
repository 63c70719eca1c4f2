#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith {

// Quantifier-free sentence true exactly in the structures equal to A
// (size and relation contents), given constant budget m > |A|.
Formula characterize_structure(const ArithStructure& a, uint32_t m);

struct Slice {
  uint32_t constant_budget = 0;
  Formula sentence;
  // The sentence is only claimed correct on structures with n >= threshold.
  uint64_t threshold = 1;
};

struct SliceFamily {
  std::string name;
  Vocabulary vocab;
  std::function<Slice(uint32_t k)> slice;
};

using SmallDecider = std::function<bool(const ArithStructure&, uint32_t k)>;

// psi_k = (c_{g-1} != c_{g-2} & phi_k) | SmallCases_k, where SmallCases_k is
// a rank-0 macro deciding structures below g(k) with the decider; its
// declared expansion lazily enumerates characterize_structure sentences of
// the yes-instances. The result is correct on every structure.
SliceFamily wrap_eventual(const SliceFamily& family, std::function<uint64_t(uint32_t)> g, SmallDecider decider);

// All structures over vocab with 1 <= n < bound, as index tuples
// (n, bit per candidate tuple in relation-declaration then lexicographic order).
class StructureFamily : public IndexFamily {
 public:
  StructureFamily(Vocabulary vocab, uint32_t bound) : vocab_(std::move(vocab)), bound_(bound) {}
  std::optional<uint64_t> size() const override;
  bool for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const override;
  std::string describe() const override;
  bool lazy() const override { return true; }
  ArithStructure decode(std::span<const uint32_t> t) const;

 private:
  uint64_t bits_for(uint32_t n) const;
  Vocabulary vocab_;
  uint32_t bound_;
};

}  // namespace foarith
