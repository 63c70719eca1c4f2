#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "foarith/circuits.hpp"
#include "foarith/formula.hpp"

namespace foarith {

class BddOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reduced ordered BDDs, variable i tested before i+1. References 0 and 1 are
// the constants.
class Bdd {
 public:
  using Ref = uint32_t;
  explicit Bdd(uint64_t node_cap = 20'000'000);

  static Ref constant(bool b) { return b ? 1 : 0; }
  Ref var(uint32_t v) { return make(v, 0, 1); }
  Ref negate(Ref a);
  Ref conj(Ref a, Ref b) { return apply(false, a, b); }
  Ref disj(Ref a, Ref b) { return apply(true, a, b); }

  bool eval(Ref r, const std::vector<bool>& bits) const;
  // Satisfying assignments over variables 0..vars-1.
  double count(Ref r, uint32_t vars) const;
  uint64_t nodes() const { return nodes_.size(); }

 private:
  struct Node {
    uint32_t var;
    Ref lo, hi;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct NodeHash {
    size_t operator()(const Node& n) const {
      return std::hash<uint64_t>{}((uint64_t{n.var} << 40) ^ (uint64_t{n.lo} << 20) ^ n.hi);
    }
  };
  Ref make(uint32_t v, Ref lo, Ref hi);
  Ref apply(bool is_or, Ref a, Ref b);

  uint64_t cap_;
  std::vector<Node> nodes_;
  std::unordered_map<Node, Ref, NodeHash> unique_;
  std::unordered_map<uint64_t, Ref> and_cache_, or_cache_;
  std::unordered_map<Ref, Ref> neg_cache_;
};

// The output of c as a function of its input bits.
Bdd::Ref circuit_bdd(Bdd& m, const Circuit& c);
// Tarskian semantics of a sentence over all structures with this layout:
// one BDD variable per encoding bit. Atoms of relations outside the layout
// throw; built-ins outside it take their arithmetic meaning.
Bdd::Ref sentence_bdd(Bdd& m, const Formula& sentence, const EncodingLayout& layout);

}  // namespace foarith
