#include "foarith/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "foarith/bdd.hpp"
#include "foarith/circuits.hpp"
#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/eventual.hpp"
#include "foarith/fagin.hpp"
#include "foarith/graph.hpp"
#include "foarith/hitting_set.hpp"
#include "foarith/parafo.hpp"
#include "foarith/syntax.hpp"
#include "foarith/transform.hpp"
#include "foarith/tuple_arith.hpp"
#include "foarith/vertex_cover.hpp"

namespace foarith {

using json = nlohmann::json;

json VerificationReport::to_json(bool with_time) const {
  json j;
  j["suite"] = suite;
  j["params"] = params;
  j["seed"] = seed;
  j["checked"] = checked;
  j["skipped"] = skipped;
  j["mismatches"] = mismatches;
  j["summary"] = summary;
  j["pass"] = pass();
  if (with_time) j["wall_time_s"] = wall_time_s;
  return j;
}

unsigned suite_threads() {
  if (const char* env = std::getenv("FOARITH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, group, instance), so results do not depend
// on scheduling.
std::mt19937_64 stream(uint64_t seed, uint64_t group, uint64_t i) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ splitmix(group * 0x100000001b3ULL + i)));
}

enum class Outcome { Pass, Mismatch, Skipped };

struct InstanceResult {
  Outcome outcome = Outcome::Pass;
  json witness;
  json info;
};

// fn(i, ctx) describes the instance in ctx before doing work, so a budget
// exception can still report what was skipped.
using InstanceFn = std::function<InstanceResult(uint64_t, json&)>;

std::vector<InstanceResult> run_instances(uint64_t count, const InstanceFn& fn) {
  std::vector<InstanceResult> out(count);
  std::atomic<uint64_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      uint64_t i = next++;
      if (i >= count) return;
      json ctx = json::object();
      try {
        out[i] = fn(i, ctx);
      } catch (const BudgetExceeded& e) {
        ctx["reason"] = "skipped:budget";
        ctx["detail"] = e.what();
        out[i] = {Outcome::Skipped, ctx, {}};
      } catch (const BddOverflow& e) {
        ctx["reason"] = "skipped:budget";
        ctx["detail"] = e.what();
        out[i] = {Outcome::Skipped, ctx, {}};
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next = count;
      }
    }
  };
  unsigned t = static_cast<unsigned>(std::min<uint64_t>(suite_threads(), count));
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

struct Ctx {
  VerificationReport& rep;
  json p;
  uint64_t seed;
  double timeout;

  template <class T>
  T get(const char* key) const {
    return p.at(key).get<T>();
  }

  void tally(const std::vector<InstanceResult>& rs, const json& group = json::object()) {
    for (auto& r : rs) {
      if (r.outcome == Outcome::Skipped) {
        if (rep.skipped++ < 5) {
          json w = r.witness;
          w.erase("edges");
          rep.summary["skipped_sample"].push_back(w);
        }
        continue;
      }
      rep.checked++;
      if (r.outcome == Outcome::Mismatch) {
        json w = r.witness;
        for (auto& [k, v] : group.items()) w[k] = v;
        rep.mismatches.push_back(std::move(w));
      }
    }
  }

  void expect(bool ok, json witness) {
    rep.checked++;
    if (!ok) rep.mismatches.push_back(std::move(witness));
  }
};

InstanceResult verdict(bool ok, json witness = json::object()) {
  return ok ? InstanceResult{} : InstanceResult{Outcome::Mismatch, std::move(witness), {}};
}

json edges_json(const Graph& g) {
  json e = json::array();
  for (auto [u, v] : g.edges) e.push_back({u, v});
  return e;
}

std::vector<uint32_t> random_subset(std::mt19937_64& rng, uint32_t n, uint32_t size) {
  std::vector<uint32_t> all(n), out;
  std::iota(all.begin(), all.end(), 0);
  for (uint32_t i = 0; i < size && i < n; ++i) {
    uint32_t j = i + static_cast<uint32_t>(rng() % (n - i));
    std::swap(all[i], all[j]);
    out.push_back(all[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Graph on n vertices from a mask over the C(n,2) pairs in lexicographic order.
Graph graph_from_mask(uint32_t n, uint64_t mask) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  uint32_t bit = 0;
  for (uint32_t u = 0; u < n; ++u)
    for (uint32_t v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1) e.emplace_back(u, v);
  return Graph::make(n, std::move(e));
}

// (n, mask) for the i-th graph among all graphs with 1 <= n <= max_n.
std::vector<std::pair<uint32_t, uint64_t>> graph_ranges(uint32_t max_n) {
  std::vector<std::pair<uint32_t, uint64_t>> r;
  for (uint32_t n = 1; n <= max_n; ++n) r.emplace_back(n, uint64_t{1} << (n * (n - 1) / 2));
  return r;
}

Graph nth_graph(const std::vector<std::pair<uint32_t, uint64_t>>& ranges, uint64_t i) {
  for (auto [n, count] : ranges) {
    if (i < count) return graph_from_mask(n, i);
    i -= count;
  }
  throw std::out_of_range("graph index");
}

uint64_t total_graphs(const std::vector<std::pair<uint32_t, uint64_t>>& ranges) {
  uint64_t t = 0;
  for (auto& r : ranges) t += r.second;
  return t;
}

bool eval_timed(const ArithStructure& a, const Formula& f, EvalMode mode, double timeout) {
  Evaluator ev(a, mode, timeout);
  return ev.evaluate(f);
}

// ---- color coding ----

void suite_chi(Ctx& c) {
  uint32_t k = c.get<uint32_t>("k");
  uint64_t trials = c.get<uint64_t>("trials");
  uint32_t fixed_n = c.get<uint32_t>("n");
  Var y = Var::named("y");
  Formula chi = build_chi(k, atom("P", {Term::var(y)}), y);
  uint64_t t = threshold_n(k);
  std::vector<uint64_t> sizes = fixed_n ? std::vector<uint64_t>{fixed_n} : std::vector<uint64_t>{t, 2 * t};
  c.rep.summary["threshold"] = t;
  c.rep.summary["sizes"] = sizes;
  uint64_t yes = 0;
  for (uint64_t n : sizes) {
    auto rs = run_instances(trials, [&](uint64_t i, json& ctx) {
      auto rng = stream(c.seed, n, i);
      uint32_t size = static_cast<uint32_t>(rng() % (2 * k + 1));
      auto members = random_subset(rng, static_cast<uint32_t>(n), size);
      ctx = {{"n", n}, {"P", members}};
      ArithStructure a(static_cast<uint32_t>(n));
      a.declare("P", 1);
      for (uint32_t v : members) a.add("P", {v});
      bool want = members.size() >= k;
      bool got = eval_timed(a, chi, EvalMode::MacroSemantic, c.timeout);
      auto r = verdict(got == want, {{"n", n}, {"P", members}, {"expected", want}, {"got", got}});
      r.info = want;
      return r;
    });
    for (auto& r : rs) yes += r.info.is_boolean() && r.info.get<bool>();
    c.tally(rs);
  }
  c.rep.summary["yes_instances"] = yes;
}

void suite_ccc(Ctx& c) {
  uint32_t n = c.get<uint32_t>("n"), k = c.get<uint32_t>("k");
  uint64_t sample = c.get<uint64_t>("sample");
  auto r = verify_ccc_lemma(n, k, sample ? std::optional<uint64_t>(sample) : std::nullopt, c.seed);
  c.rep.checked = r.checked;
  for (auto& f : r.failures) c.rep.mismatches.push_back({{"subset", f}});
  c.rep.summary["exhaustive"] = r.exhaustive;
  c.rep.summary["size_condition"] = size_condition(n, k);
}

// ---- rank facts ----

Formula rank_probe(uint32_t r, Var y) {
  Formula f = atom("P", {Term::var(y)});
  for (uint32_t i = 1; i <= r; ++i) {
    Var z = Var::named("z" + std::to_string(i));
    f = exists(z, conj({atom("E", {Term::var(z), Term::var(y)}), f}));
  }
  return f;
}

void suite_rank(Ctx& c) {
  Var y = Var::named("y");
  for (uint32_t k = 1; k <= 5; ++k)
    for (uint32_t r = 0; r <= 10; ++r) {
      uint32_t got = quantifier_rank(build_chi(k, rank_probe(r, y), y));
      uint32_t want = std::max(12u, r + 3);
      c.expect(got == want, {{"check", "chi"}, {"k", k}, {"phi_rank", r}, {"expected", want}, {"got", got}});
    }
  for (uint32_t k = 0; k <= 6; ++k) {
    uint32_t got = quantifier_rank(naive_vc_sentence(k));
    c.expect(got == k + 2, {{"check", "naive_vc"}, {"k", k}, {"expected", k + 2}, {"got", got}});
  }
  uint32_t vc1 = quantifier_rank(vc_slice_sentence(1).sentence);
  c.expect(vc1 <= 16, {{"check", "vc_slice"}, {"k", 1}, {"bound", 16}, {"got", vc1}});
  c.rep.summary["vc_slice_1"] = vc1;
  json dis = json::array();
  for (uint32_t k = 0; k <= 2; ++k) {
    uint32_t got = quantifier_rank(deg_is_slice_sentence(k).sentence);
    dis.push_back(got);
    c.expect(got <= 13, {{"check", "deg_is_slice"}, {"k", k}, {"bound", 13}, {"got", got}});
  }
  c.rep.summary["deg_is_slices"] = dis;
}

// ---- vertex cover and deg-IS ----

void graph_suite(Ctx& c, const SliceFamily& family, uint64_t threshold,
                 const std::function<bool(const Graph&, uint32_t)>& oracle,
                 const std::function<Graph(std::mt19937_64&, uint32_t, uint32_t)>& sample) {
  uint32_t k = c.get<uint32_t>("k");
  uint64_t trials = c.get<uint64_t>("trials");
  uint32_t fixed_n = c.get<uint32_t>("n");
  uint32_t exhaustive = c.get<uint32_t>("exhaustive");
  c.rep.summary["threshold"] = threshold;
  Formula f;
  try {
    f = family.slice(k).sentence;
  } catch (const BudgetExceeded& e) {
    c.rep.summary["sentence"] = std::string("skipped:budget: ") + e.what();
    c.rep.skipped = exhaustive ? total_graphs(graph_ranges(exhaustive)) : trials;
    return;
  }
  auto check = [&](const Graph& g, json& ctx) {
    ctx = {{"n", g.n}, {"edges", edges_json(g)}};
    bool want = oracle(g, k);
    bool got = eval_timed(to_structure(g), f, EvalMode::MacroSemantic, c.timeout);
    auto r = verdict(got == want, {{"n", g.n}, {"edges", edges_json(g)}, {"expected", want}, {"got", got}});
    r.info = want;
    return r;
  };
  std::vector<InstanceResult> rs;
  if (exhaustive) {
    auto ranges = graph_ranges(exhaustive);
    rs = run_instances(total_graphs(ranges), [&](uint64_t i, json& ctx) { return check(nth_graph(ranges, i), ctx); });
  } else {
    rs = run_instances(trials, [&](uint64_t i, json& ctx) {
      auto rng = stream(c.seed, k, i);
      uint32_t n = fixed_n ? fixed_n : static_cast<uint32_t>(threshold + rng() % (threshold + 1));
      return check(sample(rng, n, static_cast<uint32_t>(i)), ctx);
    });
  }
  uint64_t yes = 0;
  for (auto& r : rs) yes += r.info.is_boolean() && r.info.get<bool>();
  c.rep.summary["yes_instances"] = yes;
  c.tally(rs, {{"k", k}});
}

void suite_vc(Ctx& c) {
  uint32_t k = c.get<uint32_t>("k");
  uint64_t t = k <= 2 ? vc_threshold(k) : 0;
  graph_suite(c, vc_total_family(), t, brute_force_vc, [k](std::mt19937_64& rng, uint32_t n, uint32_t i) {
    if (i % 2) {
      uint32_t cover = std::max<uint32_t>(1, k + static_cast<uint32_t>(rng() % 2));
      return planted_cover_graph(n, cover, 1 + static_cast<uint32_t>(rng() % (2 * k + 4)), rng);
    }
    return random_graph(n, 1.0 / n, rng);
  });
}

void suite_degis(Ctx& c) {
  uint32_t k = c.get<uint32_t>("k");
  graph_suite(c, deg_is_total_family(), deg_is_threshold(k), brute_force_deg_is,
              [k](std::mt19937_64& rng, uint32_t n, uint32_t) {
                // Max degree D is planted at one vertex, so yes-instances
                // (D <= k) and no-instances both occur at every size.
                uint32_t cap = static_cast<uint32_t>(rng() % (k + 3));
                Graph g = random_bounded_degree_graph(n, static_cast<uint32_t>(rng() % (3 * k + 6)), cap, rng);
                auto deg = g.degrees();
                uint32_t hub = static_cast<uint32_t>(rng() % n);
                auto edges = g.edges;
                for (uint32_t v = 0; v < n && deg[hub] < cap; ++v)
                  if (v != hub && deg[v] < cap && !g.has_edge(hub, v)) {
                    edges.emplace_back(std::min(hub, v), std::max(hub, v));
                    ++deg[hub], ++deg[v];
                  }
                return Graph::make(n, std::move(edges));
              });
}

// ---- hitting set ----

bool for_each_small_set(uint32_t n, uint32_t k, const std::function<bool(const std::vector<uint32_t>&)>& visit) {
  std::vector<uint32_t> s;
  std::function<bool(uint32_t)> rec = [&](uint32_t from) {
    if (!visit(s)) return false;
    if (s.size() == k) return true;
    for (uint32_t v = from; v < n; ++v) {
      s.push_back(v);
      if (!rec(v + 1)) return false;
      s.pop_back();
    }
    return true;
  };
  return rec(0);
}

json hypergraph_json(const Hypergraph& g) { return {{"n", g.n}, {"d", g.d}, {"edges", g.edges}}; }

void suite_hs(Ctx& c) {
  uint32_t d_param = c.get<uint32_t>("d");
  uint64_t trials = c.get<uint64_t>("trials");
  uint32_t n_max = c.get<uint32_t>("n_max"), k_max = c.get<uint32_t>("k_max"), buss_n = c.get<uint32_t>("buss_n");
  if (n_max < 4 || k_max < 1) throw UsageError("hs: n_max >= 4 and k_max >= 1 required");
  std::vector<uint32_t> ds = d_param ? std::vector<uint32_t>{d_param} : std::vector<uint32_t>{2, 3};
  json yes = json::object();
  for (uint32_t d : ds) {
    auto rs = run_instances(trials, [&](uint64_t i, json& ctx) {
      auto rng = stream(c.seed, d, i);
      uint32_t n = 4 + static_cast<uint32_t>(rng() % (n_max - 3));
      uint32_t k = 1 + static_cast<uint32_t>(rng() % k_max);
      auto g = random_hypergraph(n, d, static_cast<uint32_t>(rng() % (3 * n)), rng);
      ctx = {{"k", k}, {"hypergraph", hypergraph_json(g)}};
      auto r = kernelize(g, k);
      json fails = json::array();
      if (!r.incidence_ok) fails.push_back("incidence");
      std::vector<uint32_t> bad;
      for_each_small_set(n, k, [&](const std::vector<uint32_t>& s) {
        if (is_hitting_set(g, s) != is_hitting_set(r.reduced, s)) {
          bad = s;
          return false;
        }
        return true;
      });
      if (!bad.empty() || brute_force_hitting_set(g, k) != brute_force_hitting_set(r.reduced, k))
        fails.push_back({{"equivalence", bad}});
      bool is_yes = min_hitting_set(g) <= k;
      if (is_yes && !(r.edge_bound_ok && r.vertex_bound_ok)) fails.push_back("size_bounds");
      auto res = verdict(fails.empty(), {{"k", k}, {"hypergraph", hypergraph_json(g)}, {"failed", fails}});
      res.info = is_yes;
      return res;
    });
    uint64_t y = 0;
    for (auto& r : rs) y += r.info.is_boolean() && r.info.get<bool>();
    yes[std::to_string(d)] = y;
    c.tally(rs, {{"d", d}});
  }
  c.rep.summary["yes_instances"] = yes;
  if (buss_n && std::find(ds.begin(), ds.end(), 2u) != ds.end()) {
    auto ranges = graph_ranges(buss_n);
    auto rs = run_instances(total_graphs(ranges), [&](uint64_t i, json& ctx) {
      Graph graph = nth_graph(ranges, i);
      ctx = {{"n", graph.n}, {"edges", edges_json(graph)}};
      auto deg = graph.degrees();
      for (uint32_t k = 1; k <= 2; ++k) {
        auto hs = kernelize(Hypergraph::from_graph(graph), k).reduced;
        auto buss = buss_kernelize(graph, k);
        std::vector<std::vector<uint32_t>> pairs, singles, surviving, high;
        for (auto& e : hs.edges) (e.size() == 2 ? pairs : singles).push_back(e);
        for (auto [u, v] : buss.reduced.edges) surviving.push_back({buss.kept[u], buss.kept[v]});
        std::sort(surviving.begin(), surviving.end());
        for (uint32_t v = 0; v < graph.n; ++v)
          if (deg[v] > k) high.push_back({v});
        if (pairs != surviving || singles != high)
          return verdict(false, {{"check", "buss"}, {"k", k}, {"n", graph.n}, {"edges", edges_json(graph)}});
      }
      return verdict(true);
    });
    c.rep.summary["buss_graphs"] = rs.size();
    c.tally(rs);
  }
}

// ---- Fagin ----

json matrix_json(const Matrix& m) { return m; }

void suite_fagin(Ctx& c) {
  uint32_t edges_n = c.get<uint32_t>("edges_n");
  uint64_t trials = c.get<uint64_t>("trials");
  uint32_t n_max = c.get<uint32_t>("n_max"), l_max = c.get<uint32_t>("l_max"), k_max = c.get<uint32_t>("k_max");
  if (n_max < 1 || l_max < 1) throw UsageError("fagin: n_max and l_max must be positive");
  auto phi = vc_fagin_formula();
  auto ranges = graph_ranges(edges_n);
  auto rs = run_instances(total_graphs(ranges), [&](uint64_t i, json& ctx) {
    Graph g = nth_graph(ranges, i);
    ctx = {{"n", g.n}, {"edges", edges_json(g)}};
    auto red = fagin_to_hypergraph(to_structure(g), phi, 1);
    bool ok = !red.fixed_no && red.hypergraph == Hypergraph::from_graph(g);
    return verdict(ok, {{"check", "vc_edges"}, {"n", g.n}, {"edges", edges_json(g)}});
  });
  c.rep.summary["vc_graphs"] = rs.size();
  c.tally(rs);
  auto ms = run_instances(trials, [&](uint64_t i, json& ctx) {
    auto rng = stream(c.seed, 77, i);
    uint32_t n = 1 + static_cast<uint32_t>(rng() % n_max);
    uint32_t l = 1 + static_cast<uint32_t>(rng() % l_max);
    auto m = random_matrix(n, l, 0.5, rng);
    ctx = {{"matrix", matrix_json(m)}, {"l", l}};
    auto inst = matrix_domination_instance(m, l);
    uint64_t ones = inst.structure.relation(Rel::named("One"))->size();
    for (uint32_t k = 0; k <= k_max; ++k) {
      auto red = fagin_to_hypergraph(inst.structure, inst.phi, k);
      bool fd = brute_force_fagin(inst.structure, inst.phi, k);
      bool hs = brute_force_hitting_set(red.hypergraph, k);
      bool ok = hs == fd;
      if (ones >= k) ok = ok && brute_force_matrix_domination(m, k) == fd;
      if (!ok) return verdict(false, {{"check", "matrix_domination"}, {"matrix", matrix_json(m)}, {"l", l}, {"k", k}});
    }
    return verdict(true);
  });
  c.tally(ms);
}

// ---- tuple arithmetic ----

uint64_t tuple_value(const TupleNum& x) {
  uint64_t v = 0;
  for (uint32_t d : x.digits) v = v * x.n + d;
  return v;
}

TupleNum tuple_from(uint32_t n, uint32_t s, uint64_t v) {
  std::vector<uint32_t> d(s);
  for (uint32_t i = s; i-- > 0; v /= n) d[i] = static_cast<uint32_t>(v % n);
  return TupleNum::make(n, d);
}

uint64_t power(uint64_t n, uint32_t s) {
  uint64_t p = 1;
  while (s--) p *= n;
  return p;
}

// Empty when add and mul agree with integers, else a witness.
json tuple_pair(TupleArith& ar, uint32_t s, uint64_t vx, uint64_t vy) {
  uint32_t n = ar.n();
  uint64_t cap = power(n, s);
  auto x = tuple_from(n, s, vx), y = tuple_from(n, s, vy);
  auto sum = ar.add(x, y);
  bool sum_ok = vx + vy >= cap ? !sum : sum && tuple_value(*sum) == vx + vy;
  auto prod = ar.mul(x, y);
  bool big = vy != 0 && vx > (cap - 1) / vy;
  bool prod_ok = big ? !prod : prod && tuple_value(*prod) == vx * vy;
  if (sum_ok && prod_ok) return json();
  return {{"n", n}, {"s", s}, {"x", x.digits}, {"y", y.digits}, {"op", sum_ok ? "mul" : "add"}};
}

void suite_tuparith(Ctx& c) {
  uint32_t ex_max = c.get<uint32_t>("exhaustive_max"), rnd_max = c.get<uint32_t>("random_max");
  uint64_t cases = c.get<uint64_t>("random_cases");
  TupleArith ten(10);
  auto pr = ten.params();
  auto fixture = ten.mul_base(4, 4);
  c.expect(pr.e == 4 && pr.l == 3 && pr.t == 6 && fixture == std::pair<uint32_t, uint32_t>{1, 6},
           {{"check", "base_ten_fixture"}, {"e", pr.e}, {"l", pr.l}, {"t", pr.t}, {"product", {fixture.first, fixture.second}}});
  auto exhaustive = run_instances(ex_max >= 3 ? ex_max - 2 : 0, [&](uint64_t i, json& ctx) {
    uint32_t n = 3 + static_cast<uint32_t>(i);
    ctx = {{"n", n}, {"s", 2}};
    TupleArith ar(n);
    uint64_t cap = power(n, 2);
    for (uint64_t u = 0; u < cap; ++u)
      for (uint64_t v = 0; v < cap; ++v)
        if (auto w = tuple_pair(ar, 2, u, v); !w.is_null()) return verdict(false, w);
    if (ar.audit().violations) return verdict(false, {{"n", n}, {"audit_violations", ar.audit().violations}});
    return verdict(true);
  });
  c.tally(exhaustive, {{"mode", "exhaustive"}});
  std::vector<std::pair<uint32_t, uint32_t>> grid;
  for (uint32_t n = 3; n <= rnd_max; ++n)
    for (uint32_t s : {2u, 3u}) grid.emplace_back(n, s);
  auto random = run_instances(grid.size(), [&](uint64_t i, json& ctx) {
    auto [n, s] = grid[i];
    ctx = {{"n", n}, {"s", s}};
    auto rng = stream(c.seed, 3, i);
    TupleArith ar(n);
    uint64_t cap = power(n, s);
    for (uint64_t j = 0; j < cases; ++j) {
      uint64_t u = rng() % cap, v = rng() % cap;
      // half of the pairs land near the multiplication overflow boundary
      if (j & 1) v = rng() % (cap / std::max<uint64_t>(u, 1) + 2) % cap;
      if (auto w = tuple_pair(ar, s, u, v); !w.is_null()) return verdict(false, w);
    }
    if (ar.audit().violations || ar.audit().max_intermediate >= n)
      return verdict(false, {{"n", n}, {"s", s}, {"audit_violations", ar.audit().violations}});
    return verdict(true);
  });
  c.tally(random, {{"mode", "random"}});
  c.expect(overflow_audit_count() == 0, {{"check", "overflow_audit"}, {"count", overflow_audit_count()}});
  c.rep.summary["overflow_audit"] = overflow_audit_count();
}

// ---- circuits ----

std::vector<Formula> random_sentences(uint64_t seed, uint64_t salt, uint64_t count, bool builtins, bool nontrivial) {
  std::mt19937_64 rng(splitmix(seed ^ salt));
  std::vector<Formula> out;
  std::vector<Var> vars{Var::named("x"), Var::named("y"), Var::named("z")};
  std::vector<RelationDecl> order{{Rel::named("E"), 2}, {Rel::named("P"), 1}};
  auto pick = [&](uint32_t k) { return static_cast<uint32_t>(rng() % k); };
  std::function<Formula(uint32_t, std::vector<Var>)> gen = [&](uint32_t depth, std::vector<Var> scope) -> Formula {
    auto term = [&]() {
      if (scope.empty() || pick(5) == 0) return Term::constant(pick(2));
      return Term::var(scope[pick(static_cast<uint32_t>(scope.size()))]);
    };
    uint32_t choice = depth == 0 ? 0 : pick(6);
    switch (choice) {
      case 0:
        switch (pick(builtins ? 5 : 3)) {
          case 0: return atom("P", {term()});
          case 1: return atom("E", {term(), term()});
          case 2: return eq(term(), term());
          case 3: return less(term(), term());
          default: return atom(pick(2) ? Rel::plus() : Rel::times(), {term(), term(), term()});
        }
      case 1:
        return neg(gen(depth - 1, scope));
      case 2:
      case 3: {
        std::vector<Formula> kids;
        for (uint32_t i = 0, cnt = 2 + pick(2); i < cnt; ++i) kids.push_back(gen(depth - 1, scope));
        return choice == 2 ? conj(std::move(kids)) : disj(std::move(kids));
      }
      default: {
        Var v = vars[pick(3)];
        auto inner = scope;
        inner.push_back(v);
        auto body = gen(depth - 1, inner);
        return choice == 4 ? exists(v, body) : forall(v, body);
      }
    }
  };
  for (uint64_t attempts = 0; out.size() < count; ++attempts) {
    if (attempts > 1000 * count) throw std::runtime_error("random_sentences: generator starved");
    Formula f = gen(5, {});
    uint32_t q = quantifier_rank(f);
    if (q < 1 || q > 3) continue;
    if (nontrivial) {
      Bdd m;
      if (sentence_bdd(m, f, EncodingLayout(3, order)) <= 1) continue;
    }
    out.push_back(f);
  }
  return out;
}

std::vector<bool> mask_bits(uint64_t mask, uint64_t len) {
  std::vector<bool> b(len);
  for (uint64_t i = 0; i < len; ++i) b[i] = mask >> i & 1;
  return b;
}

void suite_compile(Ctx& c) {
  uint64_t count = c.get<uint64_t>("sentences");
  uint32_t n_max = c.get<uint32_t>("n_max"), eval_max = c.get<uint32_t>("eval_max");
  uint32_t fanin_max = c.get<uint32_t>("fanin_max");
  uint64_t samples = c.get<uint64_t>("samples");
  std::vector<RelationDecl> order{{Rel::named("E"), 2}, {Rel::named("P"), 1}};
  auto sentences = random_sentences(c.seed, 8, count, false, true);
  auto rs = run_instances(sentences.size(), [&](uint64_t i, json& ctx) {
    const Formula& f = sentences[i];
    uint32_t q = quantifier_rank(f);
    std::string text = render_formula(f);
    ctx = {{"sentence", text}};
    json fails = json::array(), widths = json::array(), depths = json::array();
    auto rng = stream(c.seed, 88, i);
    uint64_t evaluated = 0;
    for (uint32_t n = 1; n <= std::max(n_max, fanin_max); ++n) {
      EncodingLayout layout(n, order);
      auto cr = compile(f, layout);
      const Circuit& circ = cr.circuit;
      if (n >= 2 && n <= fanin_max) widths.push_back(cr.clause_width);
      if (n > n_max) continue;
      depths.push_back(circ.depth());
      if (circ.depth() > q + 2) fails.push_back({{"check", "depth"}, {"n", n}, {"depth", circ.depth()}, {"qr", q}});
      if (circ.gates[circ.output].kind != GateKind::Or) fails.push_back({{"check", "output_or"}, {"n", n}});
      Bdd m;
      if (circuit_bdd(m, circ) != sentence_bdd(m, f, layout)) fails.push_back({{"check", "symbolic"}, {"n", n}});
      uint64_t total = uint64_t{1} << layout.length;
      bool all = n <= eval_max;
      uint64_t runs = all ? total : samples;
      for (uint64_t r = 0; r < runs; ++r) {
        uint64_t mask = all ? r : rng() & (total - 1);
        EncodedStructure enc{layout, mask_bits(mask, layout.length)};
        bool want = eval_timed(decode_structure(enc), f, EvalMode::Memoized, c.timeout);
        ++evaluated;
        if (circ.eval(enc.bits) != want) {
          fails.push_back({{"check", "model_checker"}, {"n", n}, {"bits", enc.str()}, {"expected", want}});
          break;
        }
      }
    }
    for (auto& w : widths)
      if (w != widths[0]) {
        fails.push_back({{"check", "bottom_fanin"}, {"widths", widths}});
        break;
      }
    auto res = verdict(fails.empty(), {{"sentence", text}, {"failed", fails}});
    res.info = {{"sentence", text}, {"qr", q}, {"depth", depths}, {"clause_width", widths}, {"evaluated", evaluated}};
    return res;
  });
  json info = json::array();
  for (auto& r : rs) info.push_back(r.info);
  c.rep.summary["sentences"] = info;
  c.tally(rs);
}

uint64_t lane_pattern(uint32_t j, uint64_t base) {
  static const uint64_t low[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                  0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  if (j < 6) return low[j];
  return (base >> j & 1) ? ~uint64_t{0} : 0;
}

void suite_restrict(Ctx& c) {
  uint64_t count = c.get<uint64_t>("sentences");
  uint32_t n_max = c.get<uint32_t>("n_max");
  std::vector<RelationDecl> order{
      {Rel::less(), 2}, {Rel::plus(), 3}, {Rel::times(), 3}, {Rel::named("E"), 2}, {Rel::named("P"), 1}};
  auto sentences = random_sentences(c.seed, 10, count, true, false);
  uint64_t completions = 0;
  std::mutex mu;
  auto rs = run_instances(sentences.size() * n_max * 2, [&](uint64_t i, json& ctx) {
    const Formula& f = sentences[i / (2 * n_max)];
    uint32_t n = 1 + static_cast<uint32_t>(i / 2 % n_max);
    bool partial_encoding = i % 2;
    std::string text = render_formula(f);
    ctx = {{"sentence", text}, {"n", n}, {"mode", partial_encoding ? "arith+encoding" : "arith"}};
    EncodingLayout layout(n, order);
    Circuit circ = compile(f, layout).circuit;
    auto rng = stream(c.seed, 11, i);
    ArithStructure a(n);
    a.declare("E", 2);
    a.declare("P", 1);
    if (partial_encoding) {
      std::bernoulli_distribution coin(0.4);
      for (uint32_t u = 0; u < n; ++u) {
        if (coin(rng)) a.add("P", {u});
        for (uint32_t v = 0; v < n; ++v)
          if (coin(rng)) a.add("E", {u, v});
      }
    }
    auto enc = encode_structure(a, order);
    uint64_t arith_end = layout.offset[3];
    std::map<uint64_t, bool> fixed;
    for (uint64_t b = 0; b < layout.length; ++b)
      if (b < arith_end || (partial_encoding && rng() % 2)) fixed[b] = enc.bits[b];
    std::vector<uint64_t> rest;
    for (uint64_t b = 0; b < layout.length; ++b)
      if (!fixed.count(b)) rest.push_back(b);
    Circuit r = restrict_circuit(circ, fixed);
    if (r.input_count != rest.size())
      return verdict(false, {{"sentence", text}, {"n", n}, {"check", "input_count"}});
    if (rest.size() > 30) throw BudgetExceeded("restriction sweep beyond 2^30 completions");
    uint64_t total = uint64_t{1} << rest.size();
    std::vector<uint64_t> full(layout.length), part(rest.size());
    for (auto [b, v] : fixed) full[b] = v ? ~uint64_t{0} : 0;
    for (uint64_t base = 0; base < total; base += 64) {
      for (uint32_t j = 0; j < rest.size(); ++j) full[rest[j]] = part[j] = lane_pattern(j, base);
      uint64_t valid = total - base >= 64 ? ~uint64_t{0} : (uint64_t{1} << (total - base)) - 1;
      uint64_t diff = (eval_circuit_lanes(r, part) ^ eval_circuit_lanes(circ, full)) & valid;
      if (diff) {
        uint64_t mask = base + static_cast<uint64_t>(__builtin_ctzll(diff));
        return verdict(false, {{"sentence", text}, {"n", n}, {"check", "completion"}, {"completion", mask}});
      }
    }
    std::lock_guard lock(mu);
    completions += total;
    return verdict(true);
  });
  c.rep.summary["completions"] = completions;
  c.tally(rs);
}

void suite_psid(Ctx& c) {
  uint32_t d = c.get<uint32_t>("d"), m = c.get<uint32_t>("m");
  uint64_t trials = c.get<uint64_t>("trials");
  std::mt19937_64 rng(c.seed);
  auto r = psid_equivalence(d, m, trials, rng);
  c.rep.checked = r.checked;
  for (auto& w : r.witnesses) {
    std::string bits;
    for (bool b : w) bits += b ? '1' : '0';
    c.rep.mismatches.push_back({{"d", d}, {"m", m}, {"inputs", bits}});
  }
  c.rep.summary = {{"inputs", r.inputs}, {"exhaustive", r.exhaustive}, {"circuit_true", r.circuit_true},
                   {"mismatch_count", r.mismatches}, {"sipser_parameters", sipser_parameters(d, m)}};
}

// ---- parse trees and unions ----

std::set<std::vector<uint32_t>> extension(const ArithStructure& s, Rel rel, uint32_t arity) {
  std::set<std::vector<uint32_t>> out;
  std::vector<uint32_t> t(arity, 0);
  uint32_t n = s.size();
  while (true) {
    if (s.holds(rel, t)) out.insert(t);
    size_t i = 0;
    while (i < arity && ++t[i] == n) t[i++] = 0;
    if (i == arity) break;
  }
  return out;
}

ArithStructure random_part(std::mt19937_64& rng, uint32_t n, const std::string& tag, bool scramble_less) {
  ArithStructure a(n);
  a.declare("P" + tag, 1);
  a.declare("E" + tag, 2);
  std::bernoulli_distribution coin(0.4);
  for (uint32_t u = 0; u < n; ++u) {
    if (coin(rng)) a.add("P" + tag, {u});
    for (uint32_t v = 0; v < n; ++v)
      if (coin(rng)) a.add("E" + tag, {u, v});
  }
  if (scramble_less) {
    a.override_builtin(Rel::less());
    for (uint32_t u = 0; u < n; ++u)
      for (uint32_t v = 0; v < n; ++v)
        if (coin(rng)) a.add(Rel::less(), {u, v});
  }
  return a;
}

// Empty when the union satisfies its defining properties.
std::string union_violation(const ArithStructure& a, const ArithStructure& b, const ArithStructure& u) {
  uint32_t na = a.size();
  if (u.size() != na + b.size()) return "size";
  for (uint32_t x = 0; x < u.size(); ++x)
    if (u.holds(Rel::named("U"), std::vector<uint32_t>{x}) != (x >= na)) return "marker";
  auto shifted = [&](const ArithStructure& s, Rel r, uint32_t ar, uint32_t by) {
    std::set<std::vector<uint32_t>> out;
    for (auto t : extension(s, r, ar)) {
      for (auto& v : t) v += by;
      out.insert(t);
    }
    return out;
  };
  for (auto* side : {&a, &b})
    for (auto& d : side->declared()) {
      if (d.rel.builtin()) continue;
      if (extension(u, d.rel, d.arity) != shifted(*side, d.rel, d.arity, side == &a ? 0 : na)) return d.rel.name();
    }
  for (Rel r : {Rel::less(), Rel::plus(), Rel::times()}) {
    uint32_t ar = r == Rel::less() ? 2 : 3;
    auto want = shifted(a, r, ar, 0);
    auto right = shifted(b, r, ar, na);
    want.insert(right.begin(), right.end());
    if (r == Rel::less())
      for (uint32_t x = 0; x < na; ++x)
        for (uint32_t y = na; y < u.size(); ++y) want.insert({x, y});
    if (extension(u, r, ar) != want) return r.name();
  }
  return "";
}

void suite_parafo(Ctx& c) {
  uint64_t corpus_size = c.get<uint64_t>("corpus");
  uint64_t pairs = c.get<uint64_t>("pairs");
  uint32_t n_max = c.get<uint32_t>("n_max");
  std::vector<std::pair<std::string, Formula>> corpus;
  for (uint32_t k = 0; k <= 1; ++k) corpus.emplace_back("vc_slice_" + std::to_string(k), vc_slice_sentence(k).sentence);
  for (uint32_t k = 0; k <= 2; ++k)
    corpus.emplace_back("deg_is_slice_" + std::to_string(k), deg_is_slice_sentence(k).sentence);
  Var y = Var::named("y");
  for (uint32_t k = 1; k <= 3; ++k) corpus.emplace_back("chi_" + std::to_string(k), build_chi(k, atom("P", {Term::var(y)}), y));
  uint64_t fixed = corpus.size();
  if (corpus_size > fixed) {
    auto extra = random_sentences(c.seed, 12, corpus_size - fixed, true, false);
    for (size_t i = 0; i < extra.size(); ++i) corpus.emplace_back("random_" + std::to_string(i), extra[i]);
  }
  auto rs = run_instances(corpus.size(), [&](uint64_t i, json& ctx) {
    auto& [name, f] = corpus[i];
    ctx = {{"sentence", name}};
    Formula g = normalize_for_parse_tree(f);
    auto pt = encode_parse_tree(g, 64);
    Formula back = decode_parse_tree(pt.structure);
    json fails = json::array();
    if (!structurally_equal(back, g)) fails.push_back("round_trip");
    if (!structurally_equal(normalize_for_parse_tree(g), g)) fails.push_back("normal_form");
    auto rng = stream(c.seed, 13, i);
    // Constants beyond the universe clamp, so every n is meaningful.
    for (uint32_t n = 1; n <= n_max && fails.empty(); ++n) {
      ArithStructure a(n);
      a.declare("P", 1);
      a.declare("E", 2);
      std::bernoulli_distribution coin(0.4);
      for (uint32_t u = 0; u < n; ++u) {
        if (coin(rng)) a.add("P", {u});
        for (uint32_t v = u + 1; v < n; ++v)
          if (coin(rng)) a.add("E", {u, v}), a.add("E", {v, u});
      }
      bool want = eval_timed(a, f, EvalMode::MacroSemantic, c.timeout);
      bool got = eval_timed(a, back, EvalMode::Memoized, c.timeout);
      if (want != got) fails.push_back({{"check", "semantics"}, {"n", n}});
    }
    auto res = verdict(fails.empty(), {{"sentence", name}, {"failed", fails}});
    res.info = {{"sentence", name}, {"nodes", pt.nodes}, {"q", pt.q}};
    return res;
  });
  json info = json::array();
  for (auto& r : rs) info.push_back(r.info);
  c.rep.summary["corpus"] = info;
  c.tally(rs);
  auto us = run_instances(pairs, [&](uint64_t i, json& ctx) {
    auto rng = stream(c.seed, 14, i);
    auto a = random_part(rng, 1 + static_cast<uint32_t>(rng() % 4), "1", i % 4 == 0);
    auto b = random_part(rng, 1 + static_cast<uint32_t>(rng() % 4), "2", i % 3 == 0);
    auto cc = random_part(rng, 1 + static_cast<uint32_t>(rng() % 3), "3", i % 5 == 0);
    ctx = {{"pair", i}, {"sizes", {a.size(), b.size(), cc.size()}}};
    std::string bad = union_violation(a, b, disjoint_union(a, b));
    if (!bad.empty()) return verdict(false, {{"pair", i}, {"check", "union"}, {"relation", bad}});
    auto left = disjoint_union(disjoint_union(a, b, "U"), cc, "V");
    auto right = disjoint_union(a, disjoint_union(b, cc, "V"), "U");
    bool same = left.size() == right.size();
    for (auto& d : left.declared())
      if (same && d.rel.name() != "U" && !d.rel.builtin())
        same = extension(left, d.rel, d.arity) == extension(right, d.rel, d.arity);
    for (Rel r : {Rel::less(), Rel::plus(), Rel::times()})
      if (same) same = extension(left, r, r == Rel::less() ? 2 : 3) == extension(right, r, r == Rel::less() ? 2 : 3);
    auto block = [](const ArithStructure& s, uint32_t x) {
      std::vector<uint32_t> t{x};
      return s.holds(Rel::named("V"), t) ? 2 : s.holds(Rel::named("U"), t) ? 1 : 0;
    };
    for (uint32_t x = 0; same && x < left.size(); ++x) same = block(left, x) == block(right, x);
    return verdict(same, {{"pair", i}, {"check", "associativity"}});
  });
  c.tally(us);
}

struct Entry {
  SuiteInfo info;
  std::function<void(Ctx&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"chi", "counting sentence vs |P| >= k at n = T(k) and 2T(k)", {{"k", 1}, {"trials", 300}, {"n", 0}}},
       suite_chi},
      {{"ccc", "hashing lemma over k-subsets of {0..n-1}", {{"n", 16}, {"k", 2}, {"sample", 0}}}, suite_ccc},
      {{"rank", "quantifier-rank facts of the constructed sentences", json::object()}, suite_rank},
      {{"vc", "vertex-cover slice sentence vs brute force",
        {{"k", 1}, {"trials", 200}, {"n", 0}, {"exhaustive", 0}}},
       suite_vc},
      {{"degis", "deg-independent-set slice sentence vs brute force",
        {{"k", 1}, {"trials", 200}, {"n", 0}, {"exhaustive", 0}}},
       suite_degis},
      {{"hs", "hitting-set kernel properties and the degree-two Buss cross-check",
        {{"d", 0}, {"trials", 200}, {"n_max", 14}, {"k_max", 3}, {"buss_n", 7}}},
       suite_hs},
      {{"fagin", "Fagin reduction: vertex-cover edges and matrix domination",
        {{"edges_n", 6}, {"trials", 100}, {"n_max", 5}, {"l_max", 3}, {"k_max", 3}}},
       suite_fagin},
      {{"tuparith", "tuple arithmetic vs integers",
        {{"exhaustive_max", 12}, {"random_max", 40}, {"random_cases", 10000}}},
       suite_tuparith},
      {{"compile", "compiled circuits vs the sentence semantics",
        {{"sentences", 30}, {"n_max", 5}, {"eval_max", 3}, {"samples", 300}, {"fanin_max", 6}}},
       suite_compile},
      {{"restrict", "restricting arithmetic and encoding bits preserves the output",
        {{"sentences", 10}, {"n_max", 4}}},
       suite_restrict},
      {{"psid", "Sipser circuit vs its sentence on the circuit graph", {{"d", 2}, {"m", 2}, {"trials", 200}}},
       suite_psid},
      {{"parafo", "parse-tree round trips and structure unions", {{"corpus", 50}, {"pairs", 20}, {"n_max", 5}}},
       suite_parafo},
  };
  return r;
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

VerificationReport run_suite(const std::string& name, const json& params, uint64_t seed) {
  auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.info.name == name; });
  if (it == reg.end()) throw UsageError("unknown suite '" + name + "'");
  json effective = it->info.defaults;
  effective["timeout_ms"] = 0;
  if (!params.is_null()) {
    if (!params.is_object()) throw UsageError("suite parameters must be an object");
    for (auto& [k, v] : params.items()) {
      if (!effective.contains(k)) throw UsageError("suite '" + name + "' has no parameter '" + k + "'");
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        throw UsageError("parameter '" + k + "' must be a nonnegative integer");
      effective[k] = v;
    }
  }
  VerificationReport rep;
  rep.suite = name;
  rep.params = effective;
  rep.seed = seed;
  uint64_t timeout_ms = effective["timeout_ms"].get<uint64_t>();
  Ctx ctx{rep, effective, seed, timeout_ms ? static_cast<double>(timeout_ms) / 1000 : env_timeout_seconds()};
  auto t0 = std::chrono::steady_clock::now();
  it->run(ctx);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace foarith
