#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith {

enum class GateKind : uint8_t { And, Or, Not, Input, Const };

struct Gate {
  GateKind kind = GateKind::Const;
  std::vector<uint32_t> in;
  // Input: bit index. Const: 0 or 1.
  uint64_t value = 0;
  friend bool operator==(const Gate&, const Gate&) = default;
};

// Gates are stored in topological order: every input index is smaller than
// the gate's own index.
struct Circuit {
  uint64_t input_count = 0;
  std::vector<Gate> gates;
  uint32_t output = 0;

  bool eval(const std::vector<bool>& bits) const;
  // AND/OR gates on the longest input-output path; NOT and literals are free.
  uint32_t depth() const;
  // Largest fan-in among AND/OR gates all of whose inputs are literals.
  uint32_t bottom_fanin() const;
  uint64_t size() const { return gates.size(); }
  uint64_t count(GateKind k) const;
  friend bool operator==(const Circuit&, const Circuit&) = default;
};

bool eval_circuit(const Circuit& c, const std::vector<bool>& bits);
// 64 evaluations at once: bit j of lanes[i] is input i of evaluation j.
uint64_t eval_circuit_lanes(const Circuit& c, std::span<const uint64_t> lanes);
// Fixes the given bits, propagates constants, merges nested same-kind gates,
// prunes, and renumbers the surviving inputs in their original order.
Circuit restrict_circuit(const Circuit& c, const std::map<uint64_t, bool>& partial);
Circuit simplify(const Circuit& c);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(std::string_view text);

struct EncodingLayout {
  uint32_t n = 0;
  std::vector<RelationDecl> order;
  std::vector<uint64_t> offset;
  uint64_t length = 0;

  EncodingLayout(uint32_t n, std::vector<RelationDecl> order);
  // offset(R) + sum_t a_t * n^(t-1); throws for a relation not in the order.
  uint64_t bit(Rel rel, std::span<const uint32_t> tuple) const;
  bool contains(Rel rel) const;
};

struct EncodedStructure {
  EncodingLayout layout;
  std::vector<bool> bits;
  std::string str() const;
};

// The vocabulary order: declared relations of a, or an explicit order that
// may include the built-ins <, + and *.
EncodedStructure encode_structure(const ArithStructure& a);
EncodedStructure encode_structure(const ArithStructure& a, const std::vector<RelationDecl>& order);
ArithStructure decode_structure(const EncodedStructure& e);

// Prenex form with q+1 alternating blocks (the first existential, any of
// them possibly empty) and a quantifier-free matrix. Bound variables are
// renamed apart deterministically; the first binder of a name keeps it.
struct PrenexForm {
  std::vector<std::vector<Var>> blocks;
  Formula matrix;
  bool first_exists = true;
  Formula formula() const;
  uint32_t alternations() const;
};
PrenexForm prenex_blocks(const Formula& f, uint32_t q, bool first_exists = true);
Formula prenex_sigma(const Formula& f);
Formula prenex_sigma(const Formula& f, uint32_t q);

struct CompileOptions {
  // Built-in atoms become constants instead of input bits.
  bool fold_arith = false;
  uint64_t max_gates = 20'000'000;
};

struct CompileResult {
  Circuit circuit;
  uint32_t q = 0;
  // Width of the widest instantiated matrix clause (or term).
  uint32_t clause_width = 0;
  uint32_t alternations = 0;
};

CompileResult compile(const Formula& sentence, const EncodingLayout& layout, const CompileOptions& opts = {});

// Level 1 is the output AND; level i is AND iff i is odd. Gate order: the
// inputs X in lexicographic (i_1..i_d) order, then levels d..1.
Circuit sipser_general(const std::vector<uint32_t>& m);
std::vector<uint32_t> sipser_parameters(uint32_t d, uint32_t m);
Circuit sipser_standard(uint32_t d, uint32_t m);

// Universe: gates numbered layer-major from the output down, inputs last;
// E(g', g) for g' an input of g, U the inputs of the output gate.
struct CircuitGraph {
  ArithStructure structure;
  // gate index -> universe element
  std::vector<uint32_t> node_of;
  // universe elements of the input gates, in bit order
  std::vector<uint32_t> input_nodes;
};
CircuitGraph circuit_graph_structure(const Circuit& c);
// Same, with P holding the input nodes whose bit is set.
CircuitGraph circuit_graph_structure(const Circuit& c, const std::vector<bool>& inputs);

Formula sipser_sentence(uint32_t d);

struct PsidReport {
  uint32_t d = 0, m = 0;
  uint64_t inputs = 0;
  uint64_t checked = 0;
  uint64_t mismatches = 0;
  uint64_t circuit_true = 0;
  bool exhaustive = false;
  // Input assignments of the first mismatches (at most 16).
  std::vector<std::vector<bool>> witnesses;
};
PsidReport psid_equivalence(uint32_t d, uint32_t m, uint64_t trials, std::mt19937_64& rng);

}  // namespace foarith
