#include <gtest/gtest.h>

#include <random>

#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/vertex_cover.hpp"

using namespace foarith;

namespace {

Graph triangle() { return Graph::make(3, {{0, 1}, {1, 2}, {0, 2}}); }
Graph path(uint32_t n, uint32_t len) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t i = 0; i + 1 < len; ++i) e.emplace_back(i, i + 1);
  return Graph::make(n, e);
}
Graph star(uint32_t n, uint32_t leaves) {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::make(n, e);
}

// Smallest cover by trying all vertex subsets as bitmasks.
uint32_t min_cover_bitmask(const Graph& g) {
  uint32_t best = g.n;
  for (uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    bool ok = true;
    for (auto [u, v] : g.edges) ok = ok && ((mask >> u & 1) || (mask >> v & 1));
    if (ok) best = std::min<uint32_t>(best, __builtin_popcount(mask));
  }
  return best;
}

bool eval_on(const Graph& g, const Formula& f, Assignment asg = {}) {
  auto a = to_structure(g);
  return evaluate(a, f, asg, EvalMode::MacroSemantic);
}

}  // namespace

TEST(BruteForceVc, Examples) {
  EXPECT_FALSE(brute_force_vc(triangle(), 1));
  EXPECT_TRUE(brute_force_vc(triangle(), 2));
  EXPECT_TRUE(brute_force_vc(Graph::make(4, {}), 0));
  EXPECT_TRUE(brute_force_vc(path(4, 4), 2));
  EXPECT_FALSE(brute_force_vc(Graph::make(1, {}), 2));
}

TEST(BruteForceVc, MatchesBitmaskOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    auto g = random_graph(1 + static_cast<uint32_t>(rng() % 10), 0.3, rng);
    uint32_t m = min_cover_bitmask(g);
    EXPECT_EQ(min_vertex_cover(g), m);
    for (uint32_t k = 0; k <= g.n; ++k) EXPECT_EQ(brute_force_vc(g, k), k >= m);
  }
}

TEST(Buss, Examples) {
  auto s = buss_kernelize(star(6, 5), 1);
  EXPECT_EQ(s.verdict, KernelVerdict::Yes);
  EXPECT_EQ(s.removed_high, 1u);
  EXPECT_EQ(s.k_prime, 0);
  EXPECT_EQ(s.reduced.n, 0u);

  auto t = buss_kernelize(triangle(), 1);
  EXPECT_EQ(t.verdict, KernelVerdict::No);
  EXPECT_EQ(t.removed_high, 3u);
  EXPECT_EQ(t.k_prime, -2);

  auto p = buss_kernelize(path(4, 4), 2);
  EXPECT_EQ(p.verdict, KernelVerdict::Reduced);
  EXPECT_EQ(p.removed_high, 0u);
  EXPECT_EQ(p.reduced.n, 4u);
  EXPECT_TRUE(brute_force_vc(p.reduced, 2));
}

TEST(Buss, SoundOnAllSmallGraphs) {
  std::mt19937_64 rng(2);
  std::vector<Graph> graphs;
  for (uint32_t n = 0; n <= 6; ++n)
    for (auto& g : all_graphs(n)) graphs.push_back(g);
  for (int i = 0; i < 500; ++i) graphs.push_back(random_graph(7 + static_cast<uint32_t>(rng() % 2), 0.35, rng));
  for (auto& g : graphs) {
    uint32_t m = min_vertex_cover(g);
    auto deg = g.degrees();
    for (uint32_t k = 0; k <= 3; ++k) {
      auto r = buss_kernelize(g, k);
      bool yes = m <= k;
      switch (r.verdict) {
        case KernelVerdict::Yes:
          ASSERT_TRUE(yes);
          break;
        case KernelVerdict::No:
          ASSERT_FALSE(yes);
          break;
        case KernelVerdict::Reduced:
          ASSERT_GE(r.k_prime, 0);
          ASSERT_EQ(yes, min_vertex_cover(r.reduced) <= r.k_prime);
          ASSERT_LE(r.reduced.n, r.k_prime * (k + 1));
          break;
      }
      auto rdeg = r.reduced.degrees();
      for (uint32_t v = 0; v < r.reduced.n; ++v) {
        EXPECT_LE(deg[r.kept[v]], k);
        EXPECT_GT(rdeg[v], 0u);
      }
    }
  }
}

TEST(NaiveVc, RankAndExamples) {
  for (uint32_t k = 0; k <= 6; ++k) EXPECT_EQ(quantifier_rank(naive_vc_sentence(k)), k + 2);
  EXPECT_FALSE(eval_on(triangle(), naive_vc_sentence(1)));
  EXPECT_TRUE(eval_on(path(4, 4), naive_vc_sentence(2)));
  EXPECT_EQ(quantifier_rank(naive_vc_sentence(3)), 5u);
}

TEST(NaiveVc, AgreesWithBruteForceExhaustively) {
  for (uint32_t n = 1; n <= 6; ++n)
    for (uint32_t k = 0; k <= std::min<uint32_t>(n, 3); ++k) {
      auto f = naive_vc_sentence(k);
      for (auto& g : all_graphs(n)) {
        auto a = to_structure(g);
        ASSERT_EQ(evaluate(a, f), brute_force_vc(g, k)) << "n=" << n << " k=" << k;
      }
    }
}

TEST(HighDegree, Examples) {
  auto h = high_degree_formula(1);
  EXPECT_EQ(quantifier_rank(h), 12u);
  Var x = Var::named("x");
  EXPECT_TRUE(eval_on(star(32, 3), h, {{x, 0}}));
  EXPECT_FALSE(eval_on(star(32, 3), h, {{x, 2}}));
}

TEST(HighDegree, MatchesDegrees) {
  std::mt19937_64 rng(3);
  Var x = Var::named("x");
  for (uint32_t k = 0; k <= 1; ++k) {
    auto h = high_degree_formula(k);
    for (int i = 0; i < 10; ++i) {
      uint32_t n = static_cast<uint32_t>(threshold_n(k + 1) + rng() % (threshold_n(k + 1) + 1));
      auto g = random_graph(n, 2.0 / n, rng);
      auto a = to_structure(g);
      auto deg = g.degrees();
      Evaluator ev(a, EvalMode::MacroSemantic);
      for (uint32_t v = 0; v < n; ++v) ASSERT_EQ(ev.evaluate(h, {{x, v}}), deg[v] >= k + 1);
    }
  }
}

TEST(Uni, Examples) {
  Var x = Var::named("x");
  EXPECT_EQ(quantifier_rank(uni_formula(1)), 13u);
  EXPECT_FALSE(eval_on(star(32, 3), uni_formula(1), {{x, 1}}));
  EXPECT_TRUE(eval_on(path(52, 4), uni_formula(2), {{x, 1}}));
}

TEST(Uni, MatchesKernelVertices) {
  std::mt19937_64 rng(4);
  Var x = Var::named("x");
  auto u = uni_formula(1);
  for (int i = 0; i < 10; ++i) {
    uint32_t n = static_cast<uint32_t>(threshold_n(2) + rng() % (threshold_n(2) + 1));
    auto g = random_graph(n, 1.5 / n, rng);
    auto kept = buss_kernelize(g, 1).kept;
    std::vector<char> in(n, 0);
    for (uint32_t v : kept) in[v] = 1;
    auto a = to_structure(g);
    Evaluator ev(a, EvalMode::MacroSemantic);
    for (uint32_t v = 0; v < n; ++v) ASSERT_EQ(ev.evaluate(u, {{x, v}}), in[v] != 0);
  }
}

TEST(Patterns, CountsMatchEnumeration) {
  EXPECT_EQ(vc_patterns(0, 0).size(), 1u);
  EXPECT_EQ(vc_patterns(2, 1).size(), 2u);
  EXPECT_EQ(vc_patterns(3, 1).size(), 7u);
  EXPECT_EQ(vc_patterns(3, 0).size(), 1u);
  for (uint32_t j = 0; j <= 5; ++j)
    for (uint32_t c = 0; c <= 3; ++c) {
      uint64_t want = 0;
      for (auto& g : all_graphs(j)) want += min_cover_bitmask(g) <= c;
      EXPECT_EQ(vc_patterns(j, c).size(), want);
    }
}

TEST(Rho, RangeAndSmallCases) {
  EXPECT_THROW(rho_formula(3, 1, 0), std::invalid_argument);
  EXPECT_THROW(rho_formula(0, 1, 2), std::invalid_argument);
  EXPECT_LE(quantifier_rank(rho_formula(2, 1, 0)), 16u);
  auto r0 = rho_formula(0, 1, 0);
  EXPECT_TRUE(eval_on(Graph::make(52, {}), r0));
  EXPECT_FALSE(eval_on(Graph::make(52, {{3, 7}}), r0));
  auto r2 = rho_formula(2, 1, 0);
  EXPECT_TRUE(eval_on(Graph::make(52, {{3, 7}}), r2));
  EXPECT_FALSE(eval_on(Graph::make(52, {}), r2));
}

TEST(Rho, TwoVertexKernelWithoutCoverBudget) {
  // k=2, l=2 leaves no budget; only the empty pattern on zero vertices.
  auto r = rho_formula(0, 2, 2);
  EXPECT_TRUE(eval_on(star(52, 3), r));
}

TEST(VcSlice, RankAndBudget) {
  EXPECT_LE(quantifier_rank(vc_slice_sentence(0).sentence), 16u);
  EXPECT_LE(quantifier_rank(vc_slice_sentence(1).sentence), 16u);
  EXPECT_EQ(vc_slice_sentence(1).threshold, threshold_n(3));
  EXPECT_THROW(vc_slice_sentence(3), BudgetExceeded);
}

TEST(VcSlice, KZeroIsEdgeless) {
  auto s = vc_slice_sentence(0);
  EXPECT_TRUE(eval_on(Graph::make(8, {}), s.sentence));
  EXPECT_FALSE(eval_on(Graph::make(8, {{2, 5}}), s.sentence));
}

TEST(VcSlice, TotalKZeroOnAllSmallGraphs) {
  auto f = vc_total_family().slice(0).sentence;
  for (uint32_t n = 1; n <= 5; ++n)
    for (auto& g : all_graphs(n)) ASSERT_EQ(eval_on(g, f), brute_force_vc(g, 0)) << "n=" << n;
}

TEST(VcSlice, TotalKOneBelowThreshold) {
  auto f = vc_total_family().slice(1).sentence;
  for (uint32_t n = 1; n <= 5; ++n)
    for (auto& g : all_graphs(n)) ASSERT_EQ(eval_on(g, f), brute_force_vc(g, 1)) << "n=" << n;
}

TEST(VcSlice, KOneStructuredCases) {
  auto s = vc_slice_sentence(1).sentence;
  uint32_t n = static_cast<uint32_t>(threshold_n(3));
  std::vector<Graph> gs = {Graph::make(n, {}),       Graph::make(n, {{3, 9}}),         path(n, 3), star(n, 5),
                           Graph::make(n, {{0, 1}, {2, 3}}), path(n, 4),
                           Graph::make(n, {{5, 1}, {5, 2}, {1, 2}})};
  for (auto& g : gs) EXPECT_EQ(eval_on(g, s), brute_force_vc(g, 1));
}

TEST(VcSlice, KOneRandomAtValidSizes) {
  std::mt19937_64 rng(5);
  auto f = vc_total_family().slice(1).sentence;
  uint64_t t = vc_threshold(1);
  int yes = 0;
  for (int i = 0; i < 40; ++i) {
    uint32_t n = static_cast<uint32_t>(t + rng() % (t + 1));
    auto g = i % 2 ? planted_cover_graph(n, 1 + static_cast<uint32_t>(rng() % 2), 1 + static_cast<uint32_t>(rng() % 5), rng)
                   : random_graph(n, 1.0 / n, rng);
    bool want = brute_force_vc(g, 1);
    yes += want;
    ASSERT_EQ(eval_on(g, f), want) << "n=" << n << " edges=" << g.edges.size();
  }
  EXPECT_GT(yes, 5);
  EXPECT_LT(yes, 35);
}

TEST(DegIs, OracleExamples) {
  EXPECT_TRUE(brute_force_deg_is(Graph::make(5, {}), 0));
  EXPECT_TRUE(brute_force_deg_is(Graph::make(32, {{0, 1}}), 1));
  EXPECT_FALSE(brute_force_deg_is(star(32, 3), 1));
  EXPECT_TRUE(brute_force_deg_is(star(4, 3), 4));
  EXPECT_TRUE(brute_force_deg_is(triangle(), 3));
  EXPECT_FALSE(brute_force_deg_is(triangle(), 4));
}

TEST(DegIs, RankAndExamples) {
  for (uint32_t k = 0; k <= 2; ++k) EXPECT_LE(quantifier_rank(deg_is_slice_sentence(k).sentence), 13u);
  EXPECT_TRUE(eval_on(Graph::make(5, {}), deg_is_slice_sentence(0).sentence));
  EXPECT_TRUE(eval_on(Graph::make(32, {{0, 1}}), deg_is_slice_sentence(1).sentence));
  EXPECT_FALSE(eval_on(star(32, 3), deg_is_slice_sentence(1).sentence));
}

TEST(DegIs, TotalAgreesOnSmallGraphs) {
  for (uint32_t k = 0; k <= 2; ++k) {
    auto f = deg_is_total_family().slice(k).sentence;
    for (uint32_t n = 1; n <= 5; ++n)
      for (auto& g : all_graphs(n)) ASSERT_EQ(eval_on(g, f), brute_force_deg_is(g, k)) << "n=" << n << " k=" << k;
  }
}

TEST(DegIs, RandomAtValidSizes) {
  std::mt19937_64 rng(6);
  for (uint32_t k = 0; k <= 1; ++k) {
    auto f = deg_is_total_family().slice(k).sentence;
    uint64_t t = deg_is_threshold(k);
    for (int i = 0; i < 25; ++i) {
      uint32_t n = static_cast<uint32_t>(t + rng() % (t + 1));
      auto g = random_bounded_degree_graph(n, static_cast<uint32_t>(rng() % 6), static_cast<uint32_t>(rng() % (k + 3)), rng);
      ASSERT_EQ(eval_on(g, f), brute_force_deg_is(g, k)) << "n=" << n << " k=" << k;
    }
  }
}
