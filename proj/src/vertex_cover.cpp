#include "foarith/vertex_cover.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/transform.hpp"

namespace foarith {

namespace {

// Visits every r-subset of {0..n-1} in lexicographic order until visit
// returns true; returns whether it did.
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

bool covers(const Graph& g, const std::vector<uint32_t>& c) {
  std::vector<char> in(g.n, 0);
  for (uint32_t v : c) in[v] = 1;
  for (auto [u, v] : g.edges)
    if (!in[u] && !in[v]) return false;
  return true;
}

bool is_graph(const ArithStructure& a, Rel e) {
  auto* r = a.relation(e);
  if (!r) return true;
  if (r->arity() != 2) return false;
  for (size_t i = 0; i < r->size(); ++i) {
    auto t = r->tuple(i);
    uint32_t back[2] = {t[1], t[0]};
    if (t[0] == t[1] || !r->contains(back)) return false;
  }
  return true;
}

Formula edge(Var a, Var b) { return atom("E", {Term::var(a), Term::var(b)}); }

struct VcParts {
  uint32_t k;
  Var x, y;
  Formula hx, hy, uni;
};

VcParts vc_parts(uint32_t k) {
  VcParts s{k, Var::named("x"), Var::named("y"), {}, {}, {}};
  s.hx = high_degree_formula(k, s.x);
  s.hy = high_degree_formula(k, s.y);
  s.uni = conj({neg(s.hx), neg(forall(s.y, implies(edge(s.x, s.y), s.hy)))});
  return s;
}

Formula rho(const VcParts& s, uint32_t j, uint32_t l) {
  uint32_t k = s.k;
  if (l > k || j > (k - l) * (k + 1)) throw std::invalid_argument("rho: parameters out of range");
  auto avoid = variables_of(s.uni);
  avoid.insert(s.x);
  avoid.insert(s.y);
  Var p = fresh_var("p", avoid);
  avoid.insert(p);
  Var q = fresh_var("q", avoid);
  uint32_t buckets = j * j;

  struct Shared {
    std::vector<Formula> hx, hit, cover_lit;
    std::vector<std::vector<Formula>> edge, non_edge;
    Formula no_uni;
  };
  auto sh = std::make_shared<Shared>();
  std::vector<Formula> hy;
  for (uint32_t i = 0; i < buckets; ++i) {
    sh->hx.push_back(hash_eq_macro(p, q, s.x, i, j));
    hy.push_back(hash_eq_macro(p, q, s.y, i, j));
    sh->hit.push_back(exists(s.x, conj({s.uni, sh->hx[i]})));
  }
  sh->edge.assign(buckets, std::vector<Formula>(buckets));
  sh->non_edge = sh->edge;
  for (uint32_t i = 0; i < buckets; ++i)
    for (uint32_t i2 = i + 1; i2 < buckets; ++i2) {
      auto e = exists(s.x, conj({s.uni, sh->hx[i], exists(s.y, conj({hy[i2], edge(s.x, s.y), neg(s.hy)}))}));
      sh->edge[i][i2] = e;
      sh->non_edge[i][i2] = neg(e);
    }
  sh->no_uni = neg(s.uni);

  auto patterns = &vc_patterns(j, k - l);
  auto tuples = std::make_shared<CombinationFamily>(buckets, j);
  auto child = [sh, patterns, j, x = s.x](std::span<const uint32_t> t) {
    std::vector<uint32_t> idx(t.begin(), t.end());
    std::vector<Formula> cover{sh->no_uni};
    for (uint32_t i : idx) cover.push_back(sh->hx[i]);
    std::vector<Formula> parts{forall(x, disj(std::move(cover)))};
    for (uint32_t i : idx) parts.push_back(sh->hit[i]);
    auto shapes = std::make_shared<RangeFamily>(static_cast<uint32_t>(patterns->size()));
    parts.push_back(big_or(shapes, [sh, patterns, idx, j](std::span<const uint32_t> h) {
      uint64_t mask = (*patterns)[h[0]];
      std::vector<Formula> lits;
      uint32_t bit = 0;
      for (uint32_t a = 0; a < j; ++a)
        for (uint32_t b = a + 1; b < j; ++b, ++bit)
          lits.push_back(mask >> bit & 1 ? sh->edge[idx[a]][idx[b]] : sh->non_edge[idx[a]][idx[b]]);
      return conj(std::move(lits));
    }));
    return conj(std::move(parts));
  };
  return exists(p, exists(q, big_or(tuples, child)));
}

}  // namespace

bool brute_force_vc(const Graph& g, uint32_t k) {
  return any_subset(g.n, k, [&](const std::vector<uint32_t>& c) { return covers(g, c); });
}

uint32_t min_vertex_cover(const Graph& g) {
  for (uint32_t c = 0;; ++c)
    if (brute_force_vc(g, c)) return c;
}

KernelResult buss_kernelize(const Graph& g, uint32_t k) {
  KernelResult r;
  auto deg = g.degrees();
  std::vector<char> gone(g.n, 0);
  for (uint32_t v = 0; v < g.n; ++v)
    if (deg[v] >= k + 1) gone[v] = 1, ++r.removed_high;
  r.k_prime = static_cast<int64_t>(k) - r.removed_high;
  std::vector<char> touched(g.n, 0);
  for (auto [u, v] : g.edges)
    if (!gone[u] && !gone[v]) touched[u] = touched[v] = 1;
  std::vector<uint32_t> rename(g.n, UINT32_MAX);
  for (uint32_t v = 0; v < g.n; ++v)
    if (touched[v]) rename[v] = static_cast<uint32_t>(r.kept.size()), r.kept.push_back(v);
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (auto [u, v] : g.edges)
    if (touched[u] && touched[v] && !gone[u] && !gone[v]) edges.emplace_back(rename[u], rename[v]);
  r.reduced = Graph::make(static_cast<uint32_t>(r.kept.size()), std::move(edges));
  if (r.k_prime < 0 || static_cast<int64_t>(r.kept.size()) > r.k_prime * (k + 1))
    r.verdict = KernelVerdict::No;
  else if (r.kept.empty())
    r.verdict = KernelVerdict::Yes;
  else
    r.verdict = KernelVerdict::Reduced;
  return r;
}

Formula naive_vc_sentence(uint32_t k) {
  std::vector<Var> xs;
  for (uint32_t i = 1; i <= k; ++i) xs.push_back(Var::named("x" + std::to_string(i)));
  Var u = Var::named("u"), v = Var::named("v");
  std::vector<Formula> parts;
  for (uint32_t i = 0; i < k; ++i)
    for (uint32_t j = i + 1; j < k; ++j) parts.push_back(neg(eq(Term::var(xs[i]), Term::var(xs[j]))));
  std::vector<Formula> hit;
  for (Var x : xs) {
    hit.push_back(eq(Term::var(u), Term::var(x)));
    hit.push_back(eq(Term::var(v), Term::var(x)));
  }
  parts.push_back(forall(u, forall(v, implies(edge(u, v), disj(std::move(hit))))));
  Formula f = conj(std::move(parts));
  for (uint32_t i = k; i-- > 0;) f = exists(xs[i], f);
  return f;
}

Formula high_degree_formula(uint32_t k, Var x) {
  Var z = fresh_var("z", {x});
  return build_chi(k + 1, edge(x, z), z);
}

Formula uni_formula(uint32_t k, Var x) {
  Var y = fresh_var("y", variables_of(high_degree_formula(k, x)));
  auto hx = high_degree_formula(k, x);
  return conj({neg(hx), neg(forall(y, implies(edge(x, y), high_degree_formula(k, y))))});
}

const std::vector<uint64_t>& vc_patterns(uint32_t j, uint32_t c) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, std::vector<uint64_t>> cache;
  if (j > 8) throw BudgetExceeded("vertex-cover pattern enumeration beyond 8 vertices");
  std::lock_guard lock(mu);
  auto [it, fresh] = cache.try_emplace({j, c});
  if (fresh)
    for (auto& g : all_graphs(j))
      if (min_vertex_cover(g) <= c) {
        uint64_t mask = 0;
        uint32_t bit = 0;
        for (uint32_t a = 0; a < j; ++a)
          for (uint32_t b = a + 1; b < j; ++b, ++bit)
            if (g.has_edge(a, b)) mask |= uint64_t{1} << bit;
        it->second.push_back(mask);
      }
  return it->second;
}

Formula rho_formula(uint32_t j, uint32_t k, uint32_t l) { return rho(vc_parts(k), j, l); }

uint32_t vc_max_count(uint32_t k) { return k * (k + 1) + 1; }

uint64_t vc_threshold(uint32_t k) { return threshold_n(vc_max_count(k)); }

Slice vc_slice_sentence(uint32_t k) {
  if (k >= 3) throw BudgetExceeded("vertex-cover slice beyond k = 2 exceeds the pattern budget");
  auto s = vc_parts(k);
  std::vector<Formula> by_l;
  for (uint32_t l = 0; l <= k; ++l) {
    std::vector<Formula> by_j;
    for (uint32_t j = 0; j <= (k - l) * (k + 1); ++j)
      by_j.push_back(conj({build_chi(j, s.uni, s.x), neg(build_chi(j + 1, s.uni, s.x)), rho(s, j, l)}));
    by_l.push_back(conj({build_chi(l, s.hx, s.x), neg(build_chi(l + 1, s.hx, s.x)), disj(std::move(by_j))}));
  }
  uint32_t m = vc_max_count(k);
  return Slice{m * m + 1, disj(std::move(by_l)), vc_threshold(k)};
}

SliceFamily vc_family() {
  Vocabulary v;
  v.add("E", 2);
  return SliceFamily{"vc", v, vc_slice_sentence};
}

SliceFamily vc_total_family() {
  return wrap_eventual(vc_family(), vc_threshold, [](const ArithStructure& a, uint32_t k) {
    return is_graph(a, Rel::named("E")) && brute_force_vc(graph_of(a), k);
  });
}

bool brute_force_deg_is(const Graph& g, uint32_t k) {
  uint32_t d = g.max_degree();
  if (k < d) return false;
  auto adj = g.adjacency();
  return any_subset(g.n, k - d, [&](const std::vector<uint32_t>& c) {
    for (size_t a = 0; a < c.size(); ++a)
      for (size_t b = a + 1; b < c.size(); ++b)
        if (g.has_edge(c[a], c[b])) return false;
    return true;
  });
}

Formula deg_is_slice_formula(uint32_t k) {
  Var u = Var::named("u"), y = Var::named("y");
  std::vector<Formula> some;
  for (uint32_t d = 0; d <= k + 1; ++d) some.push_back(exists(u, build_chi(d, edge(u, y), y)));
  std::vector<Formula> parts;
  for (uint32_t d = 0; d <= k; ++d) parts.push_back(conj({some[d], neg(some[d + 1])}));
  return disj(std::move(parts));
}

uint64_t deg_is_threshold(uint32_t k) { return std::max<uint64_t>(threshold_n(k + 1), uint64_t{k + 1} * k); }

Slice deg_is_slice_sentence(uint32_t k) {
  return Slice{(k + 1) * (k + 1) + 1, deg_is_slice_formula(k), deg_is_threshold(k)};
}

SliceFamily deg_is_family() {
  Vocabulary v;
  v.add("E", 2);
  return SliceFamily{"degis", v, deg_is_slice_sentence};
}

SliceFamily deg_is_total_family() {
  return wrap_eventual(deg_is_family(), deg_is_threshold, [](const ArithStructure& a, uint32_t k) {
    return is_graph(a, Rel::named("E")) && brute_force_deg_is(graph_of(a), k);
  });
}

}  // namespace foarith
