#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "foarith/structure.hpp"

namespace foarith {

// Simple undirected graph on {0..n-1}; edges stored once as (u, v), u < v,
// sorted and deduplicated.
struct Graph {
  uint32_t n = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;

  static Graph make(uint32_t n, std::vector<std::pair<uint32_t, uint32_t>> edges);
  std::vector<std::vector<uint32_t>> adjacency() const;
  std::vector<uint32_t> degrees() const;
  uint32_t max_degree() const;
  bool has_edge(uint32_t u, uint32_t v) const;
  friend bool operator==(const Graph&, const Graph&) = default;
};

ArithStructure to_structure(const Graph& g, std::string_view rel = "E");
// Reads the symmetric closure of a binary relation; self-loops are rejected.
Graph graph_of(const ArithStructure& a, std::string_view rel = "E");

// Each of the C(n,2) edges present independently with probability p.
Graph random_graph(uint32_t n, double p, std::mt19937_64& rng);
// Random graph with at most `edges` edges and maximum degree <= cap.
Graph random_bounded_degree_graph(uint32_t n, uint32_t edges, uint32_t cap, std::mt19937_64& rng);
// Up to `edges` random edges, each with an endpoint in a random set of
// `cover` vertices, so the graph has a cover of size <= cover.
Graph planted_cover_graph(uint32_t n, uint32_t cover, uint32_t edges, std::mt19937_64& rng);
// All 2^C(n,2) labelled graphs on n vertices, n <= 8.
std::vector<Graph> all_graphs(uint32_t n);

}  // namespace foarith
