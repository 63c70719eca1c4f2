#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "foarith/formula.hpp"
#include "foarith/graph.hpp"
#include "foarith/hitting_set.hpp"
#include "foarith/structure.hpp"

namespace foarith {

// Either X y_{q1} ... y_{qr} (indices into the universal variables,
// 0-based) or a first-order formula over y1..yl without X.
struct FaginDisjunct {
  std::vector<uint32_t> x_vars;
  Formula fo;
  bool second_order() const { return fo == nullptr; }
};

// forall y1..yl  AND_i OR_j psi_ij, with X of arity r.
struct FaginFormula {
  uint32_t l = 0;
  uint32_t r = 1;
  std::vector<std::vector<FaginDisjunct>> clauses;
};

Var fagin_var(uint32_t i);  // y_{i+1}
// Throws std::invalid_argument unless phi is in the normal form.
void validate_fagin(const FaginFormula& phi);
// The sentence itself, with X as an r-ary relation symbol.
Formula fagin_sentence(const FaginFormula& phi);

FaginFormula parse_fagin(const std::string& text, const Vocabulary& vocab);
FaginFormula read_fagin(std::istream& in, const Vocabulary& vocab);

struct FaginReduction {
  Hypergraph hypergraph;
  // Some clause with no X-disjunct fails: hypergraph is the fixed
  // no-instance of k+1 disjoint singletons.
  bool fixed_no = false;
};

// Hypergraph vertices are the tuples of A^r, tuple (a1..ar) numbered
// a1*n^{r-1} + ... + ar.
FaginReduction fagin_to_hypergraph(const ArithStructure& a, const FaginFormula& phi, uint32_t k);
// Some S of exactly k tuples of A^r with A |= phi(S).
bool brute_force_fagin(const ArithStructure& a, const FaginFormula& phi, uint32_t k);
// A with X interpreted as s (tuples of A^r).
ArithStructure with_second_order(const ArithStructure& a, uint32_t r, const std::vector<std::vector<uint32_t>>& s);

// forall y1 forall y2 (!E y1 y2 | X y1 | X y2)
FaginFormula vc_fagin_formula();

using Matrix = std::vector<std::vector<uint8_t>>;

struct MatrixInstance {
  ArithStructure structure;
  FaginFormula phi;
  uint32_t l;
};

// Throws std::invalid_argument if some row or column has more than l ones.
MatrixInstance matrix_domination_instance(const Matrix& m, uint32_t l);
// k positions of the matrix such that every one-entry shares a row or a
// column with a one-entry among them.
bool brute_force_matrix_domination(const Matrix& m, uint32_t k);
Matrix random_matrix(uint32_t n, uint32_t l, double density, std::mt19937_64& rng);

}  // namespace foarith
