#include "foarith/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace foarith {

Graph Graph::make(uint32_t n, std::vector<std::pair<uint32_t, uint32_t>> edges) {
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint outside the vertex set");
    if (u == v) throw std::invalid_argument("self-loop in graph");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph{n, std::move(edges)};
}

std::vector<std::vector<uint32_t>> Graph::adjacency() const {
  std::vector<std::vector<uint32_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<uint32_t> Graph::degrees() const {
  std::vector<uint32_t> d(n, 0);
  for (auto [u, v] : edges) ++d[u], ++d[v];
  return d;
}

uint32_t Graph::max_degree() const {
  auto d = degrees();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

bool Graph::has_edge(uint32_t u, uint32_t v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

ArithStructure to_structure(const Graph& g, std::string_view rel) { return graph_structure(g.n, g.edges, rel); }

Graph graph_of(const ArithStructure& a, std::string_view rel) {
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  if (auto* r = a.relation(Rel::named(rel))) {
    if (r->arity() != 2) throw std::invalid_argument("graph relation must be binary");
    for (size_t i = 0; i < r->size(); ++i) {
      auto t = r->tuple(i);
      edges.emplace_back(t[0], t[1]);
    }
  }
  return Graph::make(a.size(), std::move(edges));
}

Graph random_graph(uint32_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t u = 0; u < n; ++u)
    for (uint32_t v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return Graph::make(n, std::move(edges));
}

Graph random_bounded_degree_graph(uint32_t n, uint32_t edges, uint32_t cap, std::mt19937_64& rng) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  std::vector<uint32_t> deg(n, 0);
  if (n < 2) return Graph::make(n, {});
  std::uniform_int_distribution<uint32_t> pick(0, n - 1);
  for (uint32_t tries = 0; out.size() < edges && tries < 20 * edges + 20; ++tries) {
    uint32_t u = pick(rng), v = pick(rng);
    if (u == v || deg[u] >= cap || deg[v] >= cap) continue;
    auto e = std::minmax(u, v);
    if (std::find(out.begin(), out.end(), std::make_pair(e.first, e.second)) != out.end()) continue;
    out.emplace_back(e.first, e.second);
    ++deg[u], ++deg[v];
  }
  return Graph::make(n, std::move(out));
}

Graph planted_cover_graph(uint32_t n, uint32_t cover, uint32_t edges, std::mt19937_64& rng) {
  if (n < 2 || cover == 0) return Graph::make(n, {});
  std::vector<uint32_t> perm(n);
  for (uint32_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  cover = std::min(cover, n);
  std::uniform_int_distribution<uint32_t> in(0, cover - 1), any(0, n - 1);
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t i = 0; i < edges; ++i) {
    uint32_t u = perm[in(rng)], v = any(rng);
    if (u != v) out.emplace_back(u, v);
  }
  return Graph::make(n, std::move(out));
}

std::vector<Graph> all_graphs(uint32_t n) {
  if (n > 8) throw std::invalid_argument("all_graphs: n > 8");
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  for (uint32_t u = 0; u < n; ++u)
    for (uint32_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << pairs.size()); ++mask) {
    std::vector<std::pair<uint32_t, uint32_t>> e;
    for (size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) e.push_back(pairs[i]);
    out.push_back(Graph{n, std::move(e)});
  }
  return out;
}

}  // namespace foarith
