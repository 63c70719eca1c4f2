#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith {

// A followed by B: universe |A|+|B| with B shifted up by |A|, the marker
// relation holding B's elements, < the concatenated order, and + and * the
// union of the two local relations.
ArithStructure disjoint_union(const ArithStructure& a, const ArithStructure& b, std::string_view marker = "U");

// Macro-free, finitary, negation only on atoms, nested And/Or flattened, and
// each bound variable renamed to x_j where j is its quantifier nesting depth.
Formula normalize_for_parse_tree(const Formula& f);

// Label names used by the parse-tree structure.
std::string atom_label(Rel r);
std::string var_label(uint32_t pos, uint32_t j, Rel r);
std::string const_label(uint32_t pos, Rel r);
// Equality atoms use this pseudo relation name in labels.
inline constexpr std::string_view kEqualityName = "=";

struct ParseTree {
  ArithStructure structure;
  uint32_t nodes = 0;
  uint32_t q = 0;
};

// Nodes in pre-order from 0 (the root); E holds (parent, child); universe
// max(nodes, m). Constants must be below m.
ParseTree encode_parse_tree(const Formula& normalized, uint32_t m);
Formula decode_parse_tree(const ArithStructure& s);

}  // namespace foarith
