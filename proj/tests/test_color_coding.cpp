#include <gtest/gtest.h>

#include <random>
#include <set>

#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/syntax.hpp"
#include "foarith/transform.hpp"
#include "generators.hpp"

using namespace foarith;

namespace {

// Independent oracle: the least separating (p, q) by brute force over all
// p < k^2 log2 n, using floating point only for the bound.
std::optional<std::pair<uint32_t, uint32_t>> search_pq(uint32_t n, uint32_t k, const std::vector<uint32_t>& x) {
  double bound = k * k * std::log2(static_cast<double>(n));
  for (uint32_t p = 2; p < bound; ++p) {
    bool prime = true;
    for (uint32_t d = 2; d < p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    for (uint32_t q = 1; q < p; ++q) {
      std::set<uint32_t> values;
      for (uint32_t m : x) values.insert((q * m % p) % (k * k));
      if (values.size() == x.size()) return std::make_pair(p, q);
    }
  }
  return std::nullopt;
}

ArithStructure unary_structure(uint32_t n, const std::set<uint32_t>& members) {
  ArithStructure a(n);
  a.declare("P", 1);
  for (uint32_t m : members) a.add("P", {m});
  return a;
}

std::set<uint32_t> random_subset(std::mt19937_64& rng, uint32_t n, uint32_t size) {
  std::set<uint32_t> s;
  std::uniform_int_distribution<uint32_t> pick(0, n - 1);
  while (s.size() < size) s.insert(pick(rng));
  return s;
}

}  // namespace

TEST(HashValue, Examples) {
  EXPECT_EQ(hash_value({5, 2, 2}, 7), 0u);
  EXPECT_EQ(hash_value({7, 3, 1}, 123), 0u);
  EXPECT_EQ(hash_value({3, 1, 2}, 11), 2u);
}

TEST(FindHashParams, Examples) {
  std::vector<uint32_t> x{3, 11};
  auto h = find_hash_params(16, 2, x);
  ASSERT_TRUE(h);
  EXPECT_EQ(*h, (HashParams{3, 1, 2}));
  for (uint32_t n = 5; n < 40; ++n) {
    std::vector<uint32_t> single{n / 2};
    EXPECT_EQ(find_hash_params(n, 1, single), (HashParams{2, 1, 1}));
  }
  EXPECT_THROW(find_hash_params(16, 2, std::vector<uint32_t>{1}), std::invalid_argument);
}

// n=4, k=2, X={0,2}: the search finds p=3 below the bound 8.
TEST(FindHashParams, RegressionSmallUniverse) {
  std::vector<uint32_t> x{0, 2};
  auto h = find_hash_params(4, 2, x);
  ASSERT_TRUE(h);
  EXPECT_EQ(*h, (HashParams{3, 1, 2}));
}

TEST(FindHashParams, AgreesWithIndependentSearch) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 400; ++i) {
    uint32_t n = 2 + static_cast<uint32_t>(rng() % 80);
    uint32_t k = 1 + static_cast<uint32_t>(rng() % std::min<uint32_t>(n, 4));
    auto s = random_subset(rng, n, k);
    std::vector<uint32_t> x(s.begin(), s.end());
    auto got = find_hash_params(n, k, x);
    auto want = search_pq(n, k, x);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got) {
      EXPECT_EQ(got->p, want->first);
      EXPECT_EQ(got->q, want->second);
    }
  }
}

TEST(CccLemma, Examples) {
  auto r = verify_ccc_lemma(32, 2);
  EXPECT_EQ(r.checked, 496u);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_TRUE(verify_ccc_lemma(5, 1).failures.empty());
  EXPECT_EQ(verify_ccc_lemma(6, 6).checked, 1u);
}

TEST(CccLemma, ReportsFailuresBelowThreshold) {
  auto r = verify_ccc_lemma(4, 1);
  EXPECT_EQ(r.failures.size(), 4u);
}

TEST(Threshold, MeasuredValues) {
  EXPECT_EQ(threshold_n(0), 1u);
  EXPECT_EQ(threshold_n(1), 5u);
  EXPECT_EQ(threshold_n(2), 16u);
  EXPECT_EQ(threshold_n(3), 52u);
  EXPECT_TRUE(threshold_info(3).exhaustive);
  for (uint32_t k = 1; k <= 3; ++k) {
    EXPECT_LE(threshold_n(k - 1), threshold_n(k));
    for (uint64_t n = threshold_n(k); n <= 2 * threshold_n(k); ++n) EXPECT_TRUE(chi_valid_at(n, k));
    EXPECT_FALSE(chi_valid_at(threshold_n(k) - 1, k) && [&] {
                   for (uint64_t n = threshold_n(k) - 1; n <= 2 * (threshold_n(k) - 1); ++n)
                     if (!chi_valid_at(n, k)) return false;
                   return true;
                 }());
  }
}

TEST(Threshold, FrozenTableMatchesComputation) {
  const uint64_t want[] = {1, 5, 16, 52, 109, 190, 296, 429};
  for (uint32_t k = 0; k <= 7; ++k) {
    auto got = compute_threshold_info(k);
    EXPECT_EQ(got.n, want[k]) << "k=" << k;
    EXPECT_EQ(got.n, threshold_n(k)) << "k=" << k;
    EXPECT_EQ(got.exhaustive, threshold_info(k).exhaustive) << "k=" << k;
  }
}

TEST(HashMacro, RankAndExamples) {
  Var p = Var::named("p"), q = Var::named("q"), y = Var::named("y");
  auto m = hash_eq_macro(p, q, y, 0, 2);
  EXPECT_EQ(quantifier_rank(m), 9u);
  EXPECT_EQ(quantifier_rank(expand_macros(m)), 9u);
  EXPECT_THROW(hash_eq_macro(p, q, y, 4, 2), std::invalid_argument);

  ArithStructure big(32);
  Assignment s{{p, 5}, {q, 2}, {y, 7}};
  EXPECT_TRUE(evaluate(big, m, s, EvalMode::MacroSemantic));
  EXPECT_TRUE(evaluate(big, m, s, EvalMode::Naive));

  ArithStructure small(6);
  Assignment t{{p, 5}, {q, 4}, {y, 4}};
  EXPECT_FALSE(evaluate(small, m, t, EvalMode::MacroSemantic));
  EXPECT_FALSE(evaluate(small, expand_macros(m), t, EvalMode::Naive));
}

TEST(HashMacro, SemanticsMatchExpansionExhaustively) {
  Var p = Var::named("p"), q = Var::named("q"), y = Var::named("y");
  for (uint32_t k = 1; k <= 3; ++k) {
    for (uint32_t i = 0; i < k * k; ++i) {
      auto m = hash_eq_macro(p, q, y, i, k);
      auto e = expand_macros(m);
      for (uint32_t n = 1; n <= 12; ++n) {
        ArithStructure a(n);
        Evaluator expanded(a, EvalMode::Memoized);
        Evaluator semantic(a, EvalMode::MacroSemantic);
        for (uint32_t pv = 0; pv < n; ++pv)
          for (uint32_t qv = 0; qv < n; ++qv)
            for (uint32_t yv = 0; yv < n; ++yv) {
              Assignment s{{p, pv}, {q, qv}, {y, yv}};
              ASSERT_EQ(expanded.evaluate(e, s), semantic.evaluate(m, s))
                  << "n=" << n << " k=" << k << " i=" << i << " p=" << pv << " q=" << qv << " y=" << yv;
            }
      }
    }
  }
}

TEST(HashMacro, MatchesHashValueWhenNoOverflow) {
  Var p = Var::named("p"), q = Var::named("q"), y = Var::named("y");
  ArithStructure a(64);
  for (uint32_t i = 0; i < 4; ++i) {
    auto m = hash_eq_macro(p, q, y, i, 2);
    for (uint32_t pv : {2u, 3u, 5u, 7u})
      for (uint32_t qv = 1; qv < pv; ++qv)
        for (uint32_t yv = 0; yv < 64; ++yv) {
          Assignment s{{p, pv}, {q, qv}, {y, yv}};
          EXPECT_EQ(evaluate(a, m, s, EvalMode::MacroSemantic), hash_value({pv, qv, 2}, yv) == i);
        }
  }
}

TEST(BuildChi, RankFormula) {
  Var y = Var::named("y");
  EXPECT_EQ(quantifier_rank(build_chi(3, atom("E", {Term::var("x"), Term::var(y)}), y)), 12u);
  for (uint32_t r = 0; r <= 10; ++r) {
    Formula phi = atom("P", {Term::var(y)});
    for (uint32_t j = 0; j < r; ++j) phi = exists("w" + std::to_string(j), conj({phi, atom("P", {Term::var("w" + std::to_string(j))})}));
    ASSERT_EQ(quantifier_rank(phi), r);
    for (uint32_t k = 1; k <= 5; ++k) EXPECT_EQ(quantifier_rank(build_chi(k, phi, y)), std::max(12u, r + 3));
  }
  EXPECT_EQ(quantifier_rank(build_chi(0, atom("P", {Term::var(y)}), y)), 2u);
}

TEST(BuildChi, ZeroIsTrue) {
  Var y = Var::named("y");
  auto chi = build_chi(0, atom("P", {Term::var(y)}), y);
  EXPECT_TRUE(evaluate(unary_structure(3, {}), chi));
}

TEST(BuildChi, CountsUnaryWitnesses) {
  Var y = Var::named("y");
  auto chi = build_chi(2, atom("P", {Term::var(y)}), y);
  EXPECT_TRUE(evaluate(unary_structure(32, {1, 9, 30}), chi, {}, EvalMode::MacroSemantic));
  EXPECT_FALSE(evaluate(unary_structure(32, {17}), chi, {}, EvalMode::MacroSemantic));
}

TEST(BuildChi, FreshVariablesAvoidPhi) {
  Var y = Var::named("y");
  auto phi = conj({atom("E", {Term::var("p"), Term::var(y)}), atom("P", {Term::var("q")})});
  auto chi = build_chi(1, phi, y);
  auto fv = chi->free_vars();
  EXPECT_EQ(fv.size(), 2u);
  ArithStructure a(8);
  a.declare("P", 1);
  a.add("E", {3, 5});
  a.add("P", {2});
  Assignment s{{Var::named("p"), 3}, {Var::named("q"), 2}};
  EXPECT_TRUE(evaluate(a, chi, s, EvalMode::MacroSemantic));
  s[Var::named("p")] = 4;
  EXPECT_FALSE(evaluate(a, chi, s, EvalMode::MacroSemantic));
}

TEST(BuildExact, Examples) {
  Var y = Var::named("y");
  auto p = atom("P", {Term::var(y)});
  EXPECT_TRUE(evaluate(unary_structure(5, {}), build_exact(0, p, y)));
  auto two = build_exact(2, p, y);
  EXPECT_TRUE(evaluate(unary_structure(32, {4, 20}), two, {}, EvalMode::MacroSemantic));
  EXPECT_FALSE(evaluate(unary_structure(32, {4, 20, 21}), two, {}, EvalMode::MacroSemantic));
  EXPECT_EQ(quantifier_rank(two), quantifier_rank(build_chi(3, p, y)));
}

TEST(BuildChi, CountsInValidatedWindow) {
  std::mt19937_64 rng(21);
  Var y = Var::named("y");
  for (uint32_t k = 1; k <= 3; ++k) {
    auto chi = build_chi(k, atom("P", {Term::var(y)}), y);
    uint64_t t = threshold_n(k);
    for (int i = 0; i < 40; ++i) {
      uint32_t n = static_cast<uint32_t>(t + rng() % (t + 1));
      uint32_t size = static_cast<uint32_t>(rng() % (2 * k + 1));
      auto a = unary_structure(n, random_subset(rng, n, size));
      EXPECT_EQ(evaluate(a, chi, {}, EvalMode::MacroSemantic), size >= k) << "k=" << k << " n=" << n;
    }
  }
}

TEST(BuildChi, RandomUnaryPhiInWindow) {
  std::mt19937_64 rng(22);
  Var y = Var::named("y");
  Vocabulary v;
  v.add("P", 1);
  v.add("Q", 1);
  v.constant_budget = 4;
  std::vector<Formula> phis = {parse_formula("P(y) & !Q(y)", v), parse_formula("P(y) | y < c3", v),
                               parse_formula("exists z. P(z) & z < y & Q(y)", v)};
  for (uint32_t k = 1; k <= 2; ++k)
    for (auto& phi : phis) {
      auto chi = build_chi(k, phi, y);
      uint64_t t = threshold_n(k);
      for (int i = 0; i < 15; ++i) {
        uint32_t n = static_cast<uint32_t>(t + rng() % (t + 1));
        ArithStructure a(n);
        a.declare("P", 1);
        a.declare("Q", 1);
        for (uint32_t m : random_subset(rng, n, static_cast<uint32_t>(rng() % 4))) a.add("P", {m});
        for (uint32_t m : random_subset(rng, n, static_cast<uint32_t>(rng() % 4))) a.add("Q", {m});
        uint32_t witnesses = 0;
        for (uint32_t m = 0; m < n; ++m) witnesses += evaluate(a, phi, {{y, m}}, EvalMode::Naive);
        EXPECT_EQ(evaluate(a, chi, {}, EvalMode::MacroSemantic), witnesses >= k);
      }
    }
}
