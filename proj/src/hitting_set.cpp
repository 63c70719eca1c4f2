#include "foarith/hitting_set.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "foarith/color_coding.hpp"
#include "foarith/transform.hpp"

namespace foarith {

namespace {

template <class F>
bool any_subset(uint32_t n, uint32_t r, F visit) {
  if (r > n) return false;
  std::vector<uint32_t> c(r);
  for (uint32_t i = 0; i < r; ++i) c[i] = i;
  while (true) {
    if (visit(c)) return true;
    int i = static_cast<int>(r) - 1;
    while (i >= 0 && c[i] == n - r + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (uint32_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  }
}

// r-subsets of a sorted edge.
std::vector<std::vector<uint32_t>> subsets_of(const std::vector<uint32_t>& e, uint32_t r) {
  std::vector<std::vector<uint32_t>> out;
  any_subset(static_cast<uint32_t>(e.size()), r, [&](const std::vector<uint32_t>& c) {
    std::vector<uint32_t> s;
    for (uint32_t i : c) s.push_back(e[i]);
    out.push_back(std::move(s));
    return false;
  });
  return out;
}

std::map<std::vector<uint32_t>, uint64_t> extension_counts(const Hypergraph& g, uint32_t r) {
  std::map<std::vector<uint32_t>, uint64_t> count;
  for (auto& e : g.edges)
    for (auto& s : subsets_of(e, r)) ++count[s];
  return count;
}

}  // namespace

uint64_t ipow(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Hypergraph Hypergraph::make(uint32_t n, uint32_t d, std::vector<std::vector<uint32_t>> edges) {
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    if (e.empty()) throw std::invalid_argument("empty hyperedge");
    if (e.size() > d) throw std::invalid_argument("hyperedge larger than d");
    if (e.back() >= n) throw std::out_of_range("hyperedge vertex outside the vertex set");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Hypergraph{n, d, std::move(edges)};
}

Hypergraph Hypergraph::from_graph(const Graph& g) {
  std::vector<std::vector<uint32_t>> e;
  for (auto [u, v] : g.edges) e.push_back({u, v});
  return make(g.n, 2, std::move(e));
}

std::vector<uint32_t> Hypergraph::covered_vertices() const {
  std::set<uint32_t> s;
  for (auto& e : edges) s.insert(e.begin(), e.end());
  return {s.begin(), s.end()};
}

ArithStructure hypergraph_structure(const Hypergraph& g) {
  ArithStructure a(g.n + static_cast<uint32_t>(g.edges.size()));
  a.declare("E0", 1);
  a.declare("Eps", 2);
  for (uint32_t i = 0; i < g.edges.size(); ++i) {
    a.add("E0", {g.n + i});
    for (uint32_t v : g.edges[i]) a.add("Eps", {v, g.n + i});
  }
  return a;
}

Hypergraph hypergraph_of(const ArithStructure& a, uint32_t d) {
  auto* e0 = a.relation(Rel::named("E0"));
  auto* eps = a.relation(Rel::named("Eps"));
  std::vector<char> is_edge(a.size(), 0);
  if (e0)
    for (size_t i = 0; i < e0->size(); ++i) is_edge[e0->tuple(i)[0]] = 1;
  std::vector<uint32_t> vertex_id(a.size(), UINT32_MAX);
  uint32_t nv = 0;
  for (uint32_t x = 0; x < a.size(); ++x)
    if (!is_edge[x]) vertex_id[x] = nv++;
  std::map<uint32_t, std::vector<uint32_t>> members;
  for (uint32_t x = 0; x < a.size(); ++x)
    if (is_edge[x]) members[x];
  if (eps)
    for (size_t i = 0; i < eps->size(); ++i) {
      auto t = eps->tuple(i);
      if (is_edge[t[0]] || !is_edge[t[1]]) throw std::invalid_argument("Eps must relate a vertex to an edge");
      members[t[1]].push_back(vertex_id[t[0]]);
    }
  std::vector<std::vector<uint32_t>> edges;
  for (auto& [x, m] : members) {
    if (m.empty()) throw std::invalid_argument("edge element without members");
    edges.push_back(m);
  }
  return Hypergraph::make(nv, d, std::move(edges));
}

Hypergraph read_hypergraph(std::istream& in) {
  std::string line, word;
  std::optional<uint32_t> n;
  uint32_t d = 1;
  std::vector<std::vector<uint32_t>> edges;
  bool header = false, done = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    if (!(ls >> word)) continue;
    if (done) throw std::invalid_argument("content after end");
    if (!header) {
      if (word != "hypergraph") throw std::invalid_argument("expected 'hypergraph'");
      header = true;
    } else if (word == "universe") {
      uint32_t v;
      if (!(ls >> v)) throw std::invalid_argument("universe needs a size");
      n = v;
    } else if (word == "edge") {
      std::vector<uint32_t> e;
      uint32_t v;
      while (ls >> v) e.push_back(v);
      if (!ls.eof()) throw std::invalid_argument("malformed edge line");
      d = std::max<uint32_t>(d, static_cast<uint32_t>(e.size()));
      edges.push_back(std::move(e));
    } else if (word == "end") {
      done = true;
    } else {
      throw std::invalid_argument("unknown directive '" + word + "'");
    }
  }
  if (!header || !n || !done) throw std::invalid_argument("incomplete hypergraph file");
  return Hypergraph::make(*n, d, std::move(edges));
}

Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  return read_hypergraph(in);
}

void write_hypergraph(std::ostream& out, const Hypergraph& g) {
  out << "hypergraph\nuniverse " << g.n << "\n";
  for (auto& e : g.edges) {
    out << "edge";
    for (uint32_t v : e) out << ' ' << v;
    out << "\n";
  }
  out << "end\n";
}

bool is_hitting_set(const Hypergraph& g, const std::vector<uint32_t>& h) {
  for (auto& e : g.edges) {
    bool hit = false;
    for (uint32_t v : e) hit = hit || std::find(h.begin(), h.end(), v) != h.end();
    if (!hit) return false;
  }
  return true;
}

bool brute_force_hitting_set(const Hypergraph& g, uint32_t k) {
  return any_subset(g.n, k, [&](const std::vector<uint32_t>& h) { return is_hitting_set(g, h); });
}

uint32_t min_hitting_set(const Hypergraph& g) {
  for (uint32_t k = 0; k <= g.n; ++k)
    if (brute_force_hitting_set(g, k)) return k;
  throw std::logic_error("hypergraph without hitting set");
}

uint64_t count_extensions(const Hypergraph& g, const std::vector<uint32_t>& s) {
  uint64_t c = 0;
  for (auto& e : g.edges)
    c += std::all_of(s.begin(), s.end(), [&](uint32_t v) { return std::binary_search(e.begin(), e.end(), v); });
  return c;
}

Hypergraph reduce_level(const Hypergraph& g, uint32_t k, uint32_t l) {
  if (l < 2 || l > g.d) throw std::invalid_argument("reduce_level: need 1 < l <= d");
  for (auto& [s, c] : extension_counts(g, l))
    if (c > ipow(k, g.d - l)) throw std::domain_error("reduce_level: an l-set has too many extensions");
  std::set<std::vector<uint32_t>> marked;
  for (auto& [s, c] : extension_counts(g, l - 1))
    if (c > ipow(k, g.d - l + 1)) marked.insert(s);
  std::vector<std::vector<uint32_t>> edges;
  for (auto& e : g.edges) {
    bool extends = false;
    for (auto& s : subsets_of(e, l - 1)) extends = extends || marked.count(s);
    if (!extends) edges.push_back(e);
  }
  edges.insert(edges.end(), marked.begin(), marked.end());
  return Hypergraph::make(g.n, g.d, std::move(edges));
}

HsKernel kernelize(const Hypergraph& g, uint32_t k) {
  HsKernel r;
  r.reduced = g;
  if (k > 0)
    for (uint32_t l = g.d; l >= 2; --l) r.reduced = reduce_level(r.reduced, k, l);
  auto& e = r.reduced.edges;
  for (auto& [s, c] : extension_counts(r.reduced, 1)) r.incidence_ok = r.incidence_ok && c <= ipow(k, g.d - 1);
  r.edge_bound_ok = e.size() <= ipow(k, g.d);
  r.vertex_bound_ok = r.reduced.covered_vertices().size() <= g.d * ipow(k, g.d);
  return r;
}

Hypergraph random_hypergraph(uint32_t n, uint32_t d, uint32_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> size(1, std::min(d, n)), vertex(0, n - 1);
  std::vector<std::vector<uint32_t>> edges;
  for (uint32_t i = 0; i < m; ++i) {
    uint32_t s = size(rng);
    std::set<uint32_t> e;
    while (e.size() < s) e.insert(vertex(rng));
    edges.emplace_back(e.begin(), e.end());
  }
  return Hypergraph::make(n, d, std::move(edges));
}

uint32_t triple_index(uint32_t n, uint32_t u, uint32_t v, uint32_t w) { return (u * (n + 1) + v) * (n + 1) + w; }

uint32_t triple_of_set(uint32_t n, const std::vector<uint32_t>& s) {
  std::vector<uint32_t> t(s.begin(), s.end());
  std::sort(t.begin(), t.end());
  if (t.empty() || t.size() > 3) throw std::invalid_argument("set must have 1 to 3 elements");
  uint32_t c[3] = {0, 0, 0};
  for (size_t i = 0; i < t.size(); ++i) c[3 - t.size() + i] = t[i] + 1;
  return triple_index(n, c[0], c[1], c[2]);
}

ArithStructure triple_structure(const Hypergraph& g) {
  if (g.d > 3) throw std::invalid_argument("triple structure needs edges of size <= 3");
  uint32_t n = g.n, m = n + 1;
  ArithStructure a(m * m * m);
  for (auto name : {"Zero", "E"}) a.declare(name, 1);
  for (auto name : {"First", "Second", "Third"}) a.declare(name, 2);
  a.add("Zero", {0});
  for (uint32_t u = 0; u < m; ++u)
    for (uint32_t v = 0; v < m; ++v)
      for (uint32_t w = 0; w < m; ++w) {
        uint32_t x = triple_index(n, u, v, w);
        a.add("First", {x, u});
        a.add("Second", {x, v});
        a.add("Third", {x, w});
      }
  for (auto& e : g.edges) a.add("E", {triple_of_set(n, e)});
  return a;
}

namespace {

Formula un(const char* r, Var x) { return atom(r, {Term::var(x)}); }
Formula bin(const char* r, Var x, Var y) { return atom(r, {Term::var(x), Term::var(y)}); }

Formula set_formula(Var x) { return disj({iset_formula(1, x), iset_formula(2, x), iset_formula(3, x)}); }

}  // namespace

Formula iset_formula(uint32_t i, Var x) {
  if (i < 1 || i > 3) throw std::invalid_argument("iset_formula: i must be 1, 2 or 3");
  Var x1 = fresh_var(x.name() + "1", {x});
  Var x2 = fresh_var(x.name() + "2", {x, x1});
  Var x3 = fresh_var(x.name() + "3", {x, x1, x2});
  auto lt = [](Var a, Var b) { return less(Term::var(a), Term::var(b)); };
  Formula c1 = i == 3 ? neg(un("Zero", x1)) : un("Zero", x1);
  Formula c2 = i == 1 ? un("Zero", x2) : lt(x1, x2);
  Formula inner = exists(x3, conj({bin("Third", x, x3), lt(x2, x3)}));
  return exists(x1, conj({bin("First", x, x1), c1, exists(x2, conj({bin("Second", x, x2), c2, inner}))}));
}

Formula subset_formula(Var x, Var y) {
  Var z = fresh_var("z", {x, y});
  std::vector<Formula> parts{set_formula(x), set_formula(y)};
  for (auto r : {"First", "Second", "Third"})
    parts.push_back(forall(
        z, disj({neg(bin(r, x, z)), un("Zero", z), bin("First", y, z), bin("Second", y, z), bin("Third", y, z)})));
  return conj(std::move(parts));
}

Formula e3_formula(uint32_t k, Var x) {
  Var y = fresh_var("y", {x});
  Var w = fresh_var("w", {x, y});
  auto chi_of = [k](Var a, Var b) { return build_chi(k + 1, conj({subset_formula(a, b), un("E", b)}), b); };
  auto chi_x = chi_of(x, y);
  auto chi_y = chi_of(y, w);
  return disj({conj({iset_formula(1, x), un("E", x)}), conj({iset_formula(2, x), chi_x}),
               conj({un("E", x), neg(exists(y, conj({iset_formula(2, y), subset_formula(y, x), chi_y})))})});
}

}  // namespace foarith
