#include <gtest/gtest.h>

#include <random>

#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/parafo.hpp"
#include "foarith/syntax.hpp"
#include "foarith/vertex_cover.hpp"
#include "generators.hpp"

using namespace foarith;

namespace {

std::vector<uint32_t> members(const ArithStructure& s, std::string_view rel) {
  std::vector<uint32_t> out;
  auto r = s.relation(Rel::named(rel));
  if (!r) return out;
  for (size_t i = 0; i < r->size(); ++i) out.push_back(r->tuple(i)[0]);
  std::sort(out.begin(), out.end());
  return out;
}

// All tuples of the relation, by exhaustive holds over the universe.
std::set<std::vector<uint32_t>> extension(const ArithStructure& s, Rel rel, uint32_t arity) {
  std::set<std::vector<uint32_t>> out;
  std::vector<uint32_t> t(arity, 0);
  uint32_t n = s.size();
  if (n == 0) return out;
  while (true) {
    if (s.holds(rel, t)) out.insert(t);
    size_t i = 0;
    while (i < arity && ++t[i] == n) t[i++] = 0;
    if (i == arity) break;
  }
  return out;
}

ArithStructure random_named(std::mt19937_64& rng, uint32_t n, const std::string& p, const std::string& e,
                            bool scramble_less) {
  ArithStructure a(n);
  a.declare(p, 1);
  a.declare(e, 2);
  std::bernoulli_distribution coin(0.4);
  for (uint32_t u = 0; u < n; ++u) {
    if (coin(rng)) a.add(p, {u});
    for (uint32_t v = 0; v < n; ++v)
      if (coin(rng)) a.add(e, {u, v});
  }
  if (scramble_less) {
    a.override_builtin(Rel::less());
    for (uint32_t u = 0; u < n; ++u)
      for (uint32_t v = 0; v < n; ++v)
        if (coin(rng)) a.add(Rel::less(), {u, v});
  }
  return a;
}

}  // namespace

TEST(DisjointUnion, Examples) {
  ArithStructure a(2), b(3);
  a.declare("P", 1);
  a.add("P", {1});
  b.declare("Q", 1);
  b.add("Q", {0});
  auto u = disjoint_union(a, b);
  EXPECT_EQ(u.size(), 5u);
  EXPECT_EQ(extension(u, Rel::less(), 2).size(), 10u);
  EXPECT_EQ(members(u, "U"), (std::vector<uint32_t>{2, 3, 4}));
  EXPECT_EQ(members(u, "P"), (std::vector<uint32_t>{1}));
  EXPECT_EQ(members(u, "Q"), (std::vector<uint32_t>{2}));
  // + of the right part is translated, never mixed with the left part
  EXPECT_TRUE(u.holds(Rel::plus(), std::vector<uint32_t>{2, 3, 3}));
  EXPECT_TRUE(u.holds(Rel::plus(), std::vector<uint32_t>{3, 3, 4}));
  EXPECT_FALSE(u.holds(Rel::plus(), std::vector<uint32_t>{1, 1, 2}));
  EXPECT_FALSE(u.holds(Rel::plus(), std::vector<uint32_t>{0, 2, 2}));
  EXPECT_TRUE(u.holds(Rel::plus(), std::vector<uint32_t>{0, 1, 1}));
  EXPECT_TRUE(u.holds(Rel::times(), std::vector<uint32_t>{2, 4, 2}));
  EXPECT_TRUE(u.holds(Rel::times(), std::vector<uint32_t>{3, 4, 4}));
  EXPECT_TRUE(u.holds(Rel::times(), std::vector<uint32_t>{1, 1, 1}));
  EXPECT_FALSE(u.holds(Rel::times(), std::vector<uint32_t>{1, 2, 2}));
  EXPECT_EQ(extension(u, Rel::plus(), 3).size(), 3u + 6u);
}

TEST(DisjointUnion, LocalArithmeticMatchesParts) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    uint32_t na = 1 + rng() % 5, nb = 1 + rng() % 5;
    auto a = random_named(rng, na, "P", "E", trial % 3 == 0);
    auto b = random_named(rng, nb, "Q", "F", trial % 4 == 0);
    auto u = disjoint_union(a, b, "M");
    for (Rel r : {Rel::less(), Rel::plus(), Rel::times()}) {
      uint32_t ar = r == Rel::less() ? 2 : 3;
      auto ext = extension(u, r, ar);
      std::set<std::vector<uint32_t>> expect = extension(a, r, ar);
      for (auto t : extension(b, r, ar)) {
        for (auto& x : t) x += na;
        expect.insert(t);
      }
      if (r == Rel::less())
        for (uint32_t x = 0; x < na; ++x)
          for (uint32_t y = 0; y < nb; ++y) expect.insert({x, y + na});
      EXPECT_EQ(ext, expect) << r.name() << " trial " << trial;
    }
  }
}

TEST(DisjointUnion, RejectsClashes) {
  ArithStructure a(2), b(2);
  a.declare("P", 1);
  b.declare("P", 1);
  EXPECT_THROW(disjoint_union(a, b), std::invalid_argument);
  ArithStructure c(1);
  c.declare("U", 1);
  EXPECT_THROW(disjoint_union(c, ArithStructure(1)), std::invalid_argument);
  EXPECT_THROW(disjoint_union(ArithStructure(1), ArithStructure(1), "<"), std::invalid_argument);
}

TEST(DisjointUnion, AssociativeUpToMarkers) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_named(rng, 1 + rng() % 3, "P1", "E1", trial % 5 == 0);
    auto b = random_named(rng, 1 + rng() % 3, "P2", "E2", false);
    auto c = random_named(rng, 1 + rng() % 3, "P3", "E3", trial % 2 == 0);
    auto left = disjoint_union(disjoint_union(a, b, "U"), c, "V");
    auto right = disjoint_union(a, disjoint_union(b, c, "V"), "U");
    ASSERT_EQ(left.size(), right.size());
    for (auto name : {"P1", "P2", "P3"})
      EXPECT_EQ(extension(left, Rel::named(name), 1), extension(right, Rel::named(name), 1));
    for (auto name : {"E1", "E2", "E3"})
      EXPECT_EQ(extension(left, Rel::named(name), 2), extension(right, Rel::named(name), 2));
    EXPECT_EQ(extension(left, Rel::less(), 2), extension(right, Rel::less(), 2));
    EXPECT_EQ(extension(left, Rel::plus(), 3), extension(right, Rel::plus(), 3));
    EXPECT_EQ(extension(left, Rel::times(), 3), extension(right, Rel::times(), 3));
    auto block = [](const ArithStructure& s, uint32_t x) {
      std::vector<uint32_t> t{x};
      return s.holds(Rel::named("V"), t) ? 2 : s.holds(Rel::named("U"), t) ? 1 : 0;
    };
    for (uint32_t x = 0; x < left.size(); ++x) EXPECT_EQ(block(left, x), block(right, x));
  }
}

TEST(ParseTree, Examples) {
  auto x1 = Var::named("x1");
  auto f = exists(x1, atom("P", {Term::var(x1)}));
  auto pt = encode_parse_tree(normalize_for_parse_tree(f), 1);
  EXPECT_EQ(pt.nodes, 2u);
  EXPECT_EQ(pt.structure.size(), 2u);
  EXPECT_EQ(members(pt.structure, "Exists"), (std::vector<uint32_t>{0}));
  EXPECT_EQ(members(pt.structure, "X1"), (std::vector<uint32_t>{0}));
  EXPECT_EQ(members(pt.structure, "At-P"), (std::vector<uint32_t>{1}));
  EXPECT_EQ(members(pt.structure, "V1.1-P"), (std::vector<uint32_t>{1}));
  EXPECT_TRUE(pt.structure.holds(Rel::named("E"), std::vector<uint32_t>{0, 1}));

  auto g = atom("P", {Term::constant(2)});
  auto pg = encode_parse_tree(g, 3);
  EXPECT_EQ(pg.nodes, 1u);
  EXPECT_EQ(pg.structure.size(), 3u);
  auto c = pg.structure.relation(Rel::named("C1-P"));
  ASSERT_NE(c, nullptr);
  ASSERT_EQ(c->size(), 1u);
  EXPECT_EQ(c->tuple(0)[0], 0u);
  EXPECT_EQ(c->tuple(0)[1], 2u);
  EXPECT_THROW(encode_parse_tree(g, 2), std::invalid_argument);
  EXPECT_TRUE(structurally_equal(decode_parse_tree(pg.structure), g));
}

TEST(ParseTree, NormalizationShape) {
  auto x = Var::named("x"), y = Var::named("y");
  auto f = neg(exists(x, conj({atom("P", {Term::var(x)}), forall(y, conj({eq(Term::var(x), Term::var(y)), conj({less(Term::var(y), Term::constant(0))})}))})));
  auto g = normalize_for_parse_tree(f);
  EXPECT_EQ(render_formula(g), render_formula(forall(Var::named("x1"),
      disj({neg(atom("P", {Term::var("x1")})),
            exists(Var::named("x2"), disj({neg(eq(Term::var("x1"), Term::var("x2"))),
                                           neg(less(Term::var("x2"), Term::constant(0)))}))}))));
  EXPECT_TRUE(structurally_equal(normalize_for_parse_tree(g), g));
  EXPECT_THROW(encode_parse_tree(f, 1), std::invalid_argument);
  EXPECT_THROW(encode_parse_tree(mod_macro(x, y, x), 1), std::invalid_argument);
}

TEST(ParseTree, RoundTripCorpus) {
  std::vector<Formula> corpus;
  corpus.push_back(vc_slice_sentence(0).sentence);
  corpus.push_back(vc_slice_sentence(1).sentence);
  for (uint32_t k = 0; k <= 2; ++k) corpus.push_back(deg_is_slice_sentence(k).sentence);
  auto y = Var::named("y");
  for (uint32_t k = 1; k <= 3; ++k) corpus.push_back(build_chi(k, atom("P", {Term::var(y)}), y));
  std::mt19937_64 rng(13);
  gen::FormulaGen fg{rng, {Var::named("x"), Var::named("y"), Var::named("z")}};
  while (corpus.size() < 60) corpus.push_back(fg.formula(4, {}));
  size_t big = 0;
  for (auto& f : corpus) {
    auto g = normalize_for_parse_tree(f);
    auto pt = encode_parse_tree(g, 64);
    if (pt.nodes > 100000) ++big;
    auto back = decode_parse_tree(pt.structure);
    ASSERT_TRUE(structurally_equal(back, g)) << render_formula(f);
  }
  EXPECT_GE(big, 1u);
}

TEST(ParseTree, NormalizationPreservesSemantics) {
  std::mt19937_64 rng(14);
  gen::FormulaGen fg{rng, {Var::named("x"), Var::named("y"), Var::named("z")}};
  fg.macros = true;
  for (int i = 0; i < 40; ++i) {
    auto f = fg.formula(4, {});
    auto g = decode_parse_tree(encode_parse_tree(normalize_for_parse_tree(f), 3).structure);
    for (uint32_t n = 1; n <= 5; ++n)
      for (int s = 0; s < 3; ++s) {
        auto a = gen::random_pe_structure(rng, n);
        ASSERT_EQ(evaluate(a, f), evaluate(a, g)) << render_formula(f) << " n=" << n;
      }
  }
}

TEST(ParseTree, DecodeRejectsMalformed) {
  auto x1 = Var::named("x1");
  auto pt = encode_parse_tree(exists(x1, atom("P", {Term::var(x1)})), 1);
  auto two_roots = pt.structure;
  two_roots.add("And", {0});
  EXPECT_THROW(decode_parse_tree(two_roots), std::invalid_argument);
  ArithStructure loose(3);
  loose.declare("E", 2);
  loose.declare("And", 1);
  loose.add("And", {0});
  loose.add("And", {1});
  EXPECT_THROW(decode_parse_tree(loose), std::invalid_argument);
  ArithStructure missing(2);
  missing.declare("E", 2);
  missing.declare("At-P", 1);
  missing.declare("V1.1-P", 1);
  missing.declare("C2-P", 2);
  missing.add("At-P", {0});
  missing.add("V1.1-P", {0});
  EXPECT_THROW(decode_parse_tree(missing), std::invalid_argument);
}
