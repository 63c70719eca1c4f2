#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "foarith/formula.hpp"
#include "foarith/graph.hpp"
#include "foarith/structure.hpp"

namespace foarith {

// Hyperedges are sorted, nonempty, of size <= d; the family is sorted and
// duplicate-free.
struct Hypergraph {
  uint32_t n = 0;
  uint32_t d = 1;
  std::vector<std::vector<uint32_t>> edges;

  static Hypergraph make(uint32_t n, uint32_t d, std::vector<std::vector<uint32_t>> edges);
  static Hypergraph from_graph(const Graph& g);
  // Vertices lying in some edge.
  std::vector<uint32_t> covered_vertices() const;
  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

// Universe V then E (edge e is element n + e); unary E0 marks edges, Eps
// holds (v, e) for v in e.
ArithStructure hypergraph_structure(const Hypergraph& g);
Hypergraph hypergraph_of(const ArithStructure& a, uint32_t d);

Hypergraph read_hypergraph(std::istream& in);
Hypergraph parse_hypergraph(const std::string& text);
void write_hypergraph(std::ostream& out, const Hypergraph& g);

bool is_hitting_set(const Hypergraph& g, const std::vector<uint32_t>& h);
// A hitting set of exactly k distinct vertices (false when k > n).
bool brute_force_hitting_set(const Hypergraph& g, uint32_t k);
uint32_t min_hitting_set(const Hypergraph& g);

// Number of edges containing every vertex of s.
uint64_t count_extensions(const Hypergraph& g, const std::vector<uint32_t>& s);

// One level of the reduction: every (l-1)-set with more than k^{d-l+1}
// extensions replaces them. Throws std::domain_error if some l-set has more
// than k^{d-l} extensions.
Hypergraph reduce_level(const Hypergraph& g, uint32_t k, uint32_t l);

struct HsKernel {
  Hypergraph reduced;
  bool incidence_ok = true;    // every vertex in <= k^{d-1} edges
  bool edge_bound_ok = true;   // |E'| <= k^d
  bool vertex_bound_ok = true; // non-isolated vertices <= d k^d
};

// Levels d, d-1, ..., 2. For k = 0 the graph is returned unchanged: the
// level bounds k^{d-l} vanish and the chain's hypothesis cannot hold.
HsKernel kernelize(const Hypergraph& g, uint32_t k);

// m random edges with sizes uniform in 1..d.
Hypergraph random_hypergraph(uint32_t n, uint32_t d, uint32_t m, std::mt19937_64& rng);

uint64_t ipow(uint64_t b, uint32_t e);

// Element (u, v, w) of V^3 as (u*(n+1) + v)*(n+1) + w, with hypergraph
// vertex i named i+1 and 0 the padding element.
uint32_t triple_index(uint32_t n, uint32_t u, uint32_t v, uint32_t w);
// Structure over {Zero, E, First, Second, Third}; d <= 3 required.
ArithStructure triple_structure(const Hypergraph& g);
// Element of V^3 encoding a set of hypergraph vertices (size 1..3).
uint32_t triple_of_set(uint32_t n, const std::vector<uint32_t>& s);

// x encodes an i-set, i in {1, 2, 3}.
Formula iset_formula(uint32_t i, Var x);
// x and y encode sets and x is a subset of y.
Formula subset_formula(Var x, Var y);
// Edge relation of the level-3 reduction, free variable x.
Formula e3_formula(uint32_t k, Var x = Var::named("x"));

}  // namespace foarith
