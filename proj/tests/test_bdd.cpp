#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "foarith/bdd.hpp"
#include "foarith/eval.hpp"
#include "foarith/syntax.hpp"
#include "generators.hpp"

using namespace foarith;

namespace {

std::vector<bool> bits_of(uint64_t mask, uint64_t len) {
  std::vector<bool> b(len);
  for (uint64_t i = 0; i < len; ++i) b[i] = mask >> i & 1;
  return b;
}

}  // namespace

TEST(Bdd, Examples) {
  Bdd m;
  auto x = m.var(0), y = m.var(1);
  auto f = m.disj(m.conj(x, y), m.negate(x));
  EXPECT_EQ(m.count(f, 2), 3.0);
  EXPECT_TRUE(m.eval(f, {false, false}));
  EXPECT_FALSE(m.eval(f, {true, false}));
  EXPECT_EQ(m.disj(x, m.negate(x)), Bdd::constant(true));
  EXPECT_EQ(m.conj(f, m.negate(f)), Bdd::constant(false));
  // canonical: same function, same reference
  EXPECT_EQ(m.disj(m.negate(x), y), f);
  Bdd tiny(4);
  tiny.var(0);
  tiny.var(1);
  EXPECT_THROW(tiny.var(2), BddOverflow);
}

TEST(Bdd, CircuitMatchesEvaluation) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    uint32_t k = 1 + rng() % 6;
    Circuit c;
    c.input_count = k;
    for (uint32_t i = 0; i < k; ++i) c.gates.push_back({GateKind::Input, {}, i});
    c.gates.push_back({GateKind::Const, {}, trial % 2});
    for (int i = 0; i < 15; ++i) {
      uint32_t have = static_cast<uint32_t>(c.gates.size());
      Gate g;
      uint32_t kind = rng() % 3;
      g.kind = kind == 0 ? GateKind::Not : kind == 1 ? GateKind::And : GateKind::Or;
      uint32_t fan = g.kind == GateKind::Not ? 1 : 1 + rng() % 3;
      for (uint32_t j = 0; j < fan; ++j) g.in.push_back(static_cast<uint32_t>(rng() % have));
      c.gates.push_back(g);
    }
    c.output = static_cast<uint32_t>(c.gates.size() - 1);
    Bdd m;
    auto r = circuit_bdd(m, c);
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask)
      ASSERT_EQ(m.eval(r, bits_of(mask, k)), c.eval(bits_of(mask, k)));
  }
}

TEST(Bdd, SentenceMatchesModelChecker) {
  std::mt19937_64 rng(32);
  gen::FormulaGen fg{rng, {Var::named("x"), Var::named("y"), Var::named("z")}};
  fg.builtins = true;
  std::vector<RelationDecl> order{{Rel::named("P"), 1}, {Rel::named("E"), 2}};
  for (int i = 0; i < 30; ++i) {
    auto f = fg.formula(4, {});
    for (uint32_t n = 1; n <= 2; ++n) {
      EncodingLayout layout(n, order);
      Bdd m;
      auto r = sentence_bdd(m, f, layout);
      for (uint64_t mask = 0; mask < (uint64_t{1} << layout.length); ++mask) {
        ArithStructure a(n);
        a.declare("P", 1);
        a.declare("E", 2);
        auto bits = bits_of(mask, layout.length);
        for (uint32_t x = 0; x < n; ++x) {
          if (bits[layout.bit(Rel::named("P"), std::vector<uint32_t>{x})]) a.add("P", {x});
          for (uint32_t y = 0; y < n; ++y)
            if (bits[layout.bit(Rel::named("E"), std::vector<uint32_t>{x, y})]) a.add("E", {x, y});
        }
        ASSERT_EQ(m.eval(r, bits), evaluate(a, f)) << render_formula(f) << " n=" << n;
      }
    }
  }
}
