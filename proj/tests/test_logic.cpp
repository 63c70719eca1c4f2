#include <gtest/gtest.h>

#include <random>

#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/eventual.hpp"
#include "foarith/syntax.hpp"
#include "foarith/transform.hpp"
#include "generators.hpp"

using namespace foarith;

namespace {

Vocabulary pe_vocab(uint32_t m = 8) {
  Vocabulary v;
  v.add("P", 1);
  v.add("E", 2);
  v.constant_budget = m;
  return v;
}

Term var(const char* name) { return Term::var(name); }

}  // namespace

TEST(Parse, NestedExistentials) {
  auto f = parse_formula("exists x. exists y. E(x,y)", pe_vocab());
  auto expected = exists("x", exists("y", atom("E", {var("x"), var("y")})));
  EXPECT_TRUE(structurally_equal(f, expected));
}

TEST(Parse, NegatedEqualityConjunction) {
  auto f = parse_formula("!(x = c1) & P(x)", pe_vocab());
  auto expected = conj({neg(eq(var("x"), Term::constant(1))), atom("P", {var("x")})});
  EXPECT_TRUE(structurally_equal(f, expected));
}

TEST(Parse, ArityMismatch) {
  EXPECT_THROW(parse_formula("E(x)", pe_vocab()), ParseError);
}

TEST(Parse, UnknownRelation) {
  EXPECT_THROW(parse_formula("Q(x)", pe_vocab()), ParseError);
}

TEST(Parse, ConstantOutsideBudget) {
  EXPECT_THROW(parse_formula("x = c8", pe_vocab(8)), ParseError);
  EXPECT_NO_THROW(parse_formula("x = c7", pe_vocab(8)));
}

TEST(Parse, SyntaxErrorPosition) {
  try {
    parse_formula("P(x) & & P(y)", pe_vocab());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Parse, AndBindsTighterThanOr) {
  auto f = parse_formula("P(x) | P(y) & P(z)", pe_vocab());
  ASSERT_EQ(f->kind(), Kind::Or);
  EXPECT_EQ(f->children()[1]->kind(), Kind::And);
}

TEST(Parse, BuiltinsAndTimesSign) {
  auto f = parse_formula("+(x,y,z) & \xC3\x97(x,y,z) & *(x,x,y) & x < y & <(y,z)", pe_vocab());
  ASSERT_EQ(f->kind(), Kind::And);
  EXPECT_EQ(f->children()[1]->relation(), Rel::times());
  EXPECT_EQ(f->children()[2]->relation(), Rel::times());
  EXPECT_EQ(f->children()[4]->relation(), Rel::less());
}

TEST(Render, Quantifier) {
  EXPECT_EQ(render_formula(exists("x", atom("P", {var("x")}))), "exists x. P(x)");
}

TEST(Render, MaterializedBigOr) {
  auto f = big_or(std::make_shared<RangeFamily>(3),
                  [](std::span<const uint32_t> t) { return atom("P", {Term::constant(t[0])}); });
  EXPECT_EQ(render_formula(f), "P(c0) | P(c1) | P(c2)");
}

TEST(Render, HashMacroCall) {
  auto m = hash_eq_macro(Var::named("p"), Var::named("q"), Var::named("y"), 0, 2);
  EXPECT_EQ(render_formula(m), "hashEq[k=2](p,q,y,c0)");
  auto table = macro_table(m);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table[0].first, "hashEq[k=2](p,q,y,c0)");
}

TEST(Rank, Atom) { EXPECT_EQ(quantifier_rank(atom("E", {var("x"), var("y")})), 0u); }

TEST(Eval, ExistsEdge) {
  ArithStructure a(4);
  a.add("E", {0, 1});
  EXPECT_TRUE(evaluate(a, parse_formula("exists x. exists y. E(x,y)", pe_vocab())));
}

TEST(Eval, AdditionOverflowIsAbsent) {
  ArithStructure a(3);
  EXPECT_FALSE(evaluate(a, parse_formula("exists z. +(c2,c2,z)", pe_vocab())));
  EXPECT_TRUE(evaluate(a, parse_formula("exists z. +(c1,c1,z)", pe_vocab())));
}

TEST(Eval, ConstantsClamp) {
  ArithStructure a(3);
  EXPECT_TRUE(evaluate(a, parse_formula("c5 = c2", pe_vocab())));
  ArithStructure b(1);
  EXPECT_TRUE(evaluate(b, parse_formula("c3 = c0 & !(c0 < c0)", pe_vocab())));
}

TEST(Eval, MissingFreeVariable) {
  ArithStructure a(2);
  a.declare("P", 1);
  EXPECT_THROW(evaluate(a, atom("P", {var("x")})), std::invalid_argument);
}

TEST(Eval, UnregisteredMacroInSemanticMode) {
  MacroSpec spec;
  spec.name = "plain";
  spec.expansion = truth();
  auto m = macro(spec);
  ArithStructure a(2);
  EXPECT_TRUE(evaluate(a, m, {}, EvalMode::Memoized));
  EXPECT_THROW(evaluate(a, m, {}, EvalMode::MacroSemantic), std::runtime_error);
}

TEST(Eval, EmptyJunctions) {
  ArithStructure a(2);
  EXPECT_TRUE(evaluate(a, truth()));
  EXPECT_FALSE(evaluate(a, falsity()));
  auto empty = std::make_shared<RangeFamily>(0);
  auto gen = [](std::span<const uint32_t>) { return falsity(); };
  EXPECT_FALSE(evaluate(a, big_or(empty, gen)));
  EXPECT_TRUE(evaluate(a, big_and(empty, gen)));
}

TEST(Eval, StreamedFamilyMatchesMaterialized) {
  ArithStructure a(5);
  a.add("P", {3});
  auto fam = std::make_shared<RangeFamily>(5);
  auto gen = [](std::span<const uint32_t> t) { return atom("P", {Term::constant(t[0])}); };
  auto materialized = big_or(fam, gen);
  uint64_t saved = materialization_budget();
  set_materialization_budget(2);
  auto streamed = big_or(fam, gen);
  set_materialization_budget(saved);
  EXPECT_TRUE(materialized->materialized());
  EXPECT_FALSE(streamed->materialized());
  EXPECT_TRUE(evaluate(a, materialized));
  EXPECT_TRUE(evaluate(a, streamed, {}, EvalMode::Naive));
  EXPECT_EQ(render_formula(streamed), render_formula(materialized));
}

TEST(Expand, ModMacro) {
  auto m = mod_macro(Var::named("x"), Var::named("y"), Var::named("z"));
  EXPECT_EQ(render_formula(expand_macros(m)), "exists u. exists u'. *(u,z,u') & +(u',x,y) & x < z");
  EXPECT_EQ(quantifier_rank(m), 2u);
}

TEST(Expand, IdentityWithoutMacros) {
  auto f = parse_formula("forall x. P(x) | E(x,x)", pe_vocab());
  EXPECT_EQ(expand_macros(f), f);
}

TEST(Expand, ModMacroAgreesInAllModes) {
  auto m = mod_macro(Var::named("x"), Var::named("y"), Var::named("z"));
  auto e = expand_macros(m);
  for (uint32_t n = 1; n <= 7; ++n) {
    ArithStructure a(n);
    for (uint32_t x = 0; x < n; ++x)
      for (uint32_t y = 0; y < n; ++y)
        for (uint32_t z = 0; z < n; ++z) {
          Assignment s{{Var::named("x"), x}, {Var::named("y"), y}, {Var::named("z"), z}};
          bool expected = z != 0 && x == y % z;
          EXPECT_EQ(evaluate(a, e, s, EvalMode::Naive), expected);
          EXPECT_EQ(evaluate(a, m, s, EvalMode::Memoized), expected);
          EXPECT_EQ(evaluate(a, m, s, EvalMode::MacroSemantic), expected);
        }
  }
}

TEST(Characterize, Example) {
  ArithStructure a(2);
  a.declare("P", 1);
  a.add("P", {1});
  auto f = characterize_structure(a, 3);
  EXPECT_EQ(render_formula(f), "c1 != c0 & c2 = c1 & !P(c0) & P(c1)");
  EXPECT_EQ(quantifier_rank(f), 0u);
  EXPECT_TRUE(evaluate(a, f));
  ArithStructure b(3);
  b.declare("P", 1);
  b.add("P", {1});
  EXPECT_FALSE(evaluate(b, f));
  EXPECT_THROW(characterize_structure(a, 2), std::invalid_argument);
}

namespace {

std::vector<ArithStructure> all_structures(const Vocabulary& v, uint32_t below) {
  std::vector<ArithStructure> out;
  StructureFamily fam(v, below);
  fam.for_each([&](std::span<const uint32_t> t) {
    out.push_back(fam.decode(t));
    return true;
  });
  return out;
}

}  // namespace

TEST(Characterize, ExactlyOneModelAmongSmallStructures) {
  Vocabulary unary;
  unary.add("P", 1);
  Vocabulary binary;
  binary.add("E", 2);
  for (auto* v : {&unary, &binary}) {
    uint32_t m = v == &unary ? 4 : 3;
    auto all = all_structures(*v, m);
    for (auto& a : all) {
      auto f = characterize_structure(a, m);
      int models = 0;
      for (auto& b : all)
        if (evaluate(b, f)) {
          ++models;
          EXPECT_TRUE(a == b);
        }
      EXPECT_EQ(models, 1);
    }
  }
}

namespace {

SliceFamily toy_family() {
  // "P is nonempty" claimed only for n >= 4; phi deliberately wrong below.
  SliceFamily f;
  f.name = "toy";
  f.vocab.add("P", 1);
  f.slice = [](uint32_t) {
    Slice s;
    s.sentence = exists("x", atom("P", {var("x")}));
    s.constant_budget = 0;
    s.threshold = 4;
    return s;
  };
  return f;
}

}  // namespace

TEST(WrapEventual, GuardFollowsClamping) {
  auto decider = [](const ArithStructure& a, uint32_t) { return a.size() == 3; };
  auto wrapped = wrap_eventual(toy_family(), [](uint32_t) { return 4; }, decider).slice(0);
  EXPECT_EQ(wrapped.constant_budget, 4u);
  EXPECT_EQ(quantifier_rank(wrapped.sentence), 1u);
  ArithStructure small(3);
  small.declare("P", 1);
  EXPECT_TRUE(evaluate(small, wrapped.sentence, {}, EvalMode::MacroSemantic));
  ArithStructure large(5);
  large.declare("P", 1);
  EXPECT_FALSE(evaluate(large, wrapped.sentence, {}, EvalMode::MacroSemantic));
  large.add("P", {4});
  EXPECT_TRUE(evaluate(large, wrapped.sentence, {}, EvalMode::MacroSemantic));
}

TEST(WrapEventual, LazyExpansionMatchesDecider) {
  auto decider = [](const ArithStructure& a, uint32_t) {
    const auto* p = a.relation(Rel::named("P"));
    return p && p->size() == 1;
  };
  auto wrapped = wrap_eventual(toy_family(), [](uint32_t) { return 3; }, decider).slice(0);
  for (auto& b : all_structures(toy_family().vocab, 3)) {
    bool expected = decider(b, 0);
    EXPECT_EQ(evaluate(b, wrapped.sentence, {}, EvalMode::MacroSemantic), expected);
    EXPECT_EQ(evaluate(b, wrapped.sentence, {}, EvalMode::Memoized), expected);
  }
}

TEST(WrapEventual, RejectsNonMonotoneThreshold) {
  auto decider = [](const ArithStructure&, uint32_t) { return false; };
  auto wrapped = wrap_eventual(toy_family(), [](uint32_t k) { return k == 0 ? 9 : 3; }, decider);
  EXPECT_THROW(wrapped.slice(1), std::invalid_argument);
}

TEST(Properties, RenderParseRoundTrip) {
  std::mt19937_64 rng(11);
  gen::FormulaGen fg{rng, {Var::named("x"), Var::named("y"), Var::named("z")}};
  for (int i = 0; i < 500; ++i) {
    auto f = fg.formula(4, {});
    auto text = render_formula(f);
    auto g = parse_formula(text, pe_vocab(3));
    EXPECT_TRUE(structurally_equal(f, g)) << text;
  }
}

TEST(Properties, EvaluationModesAgree) {
  std::mt19937_64 rng(12);
  gen::FormulaGen fg{rng, {Var::named("x"), Var::named("y"), Var::named("z")}};
  fg.macros = true;
  for (int i = 0; i < 300; ++i) {
    auto f = fg.formula(4, {});
    uint32_t n = 1 + static_cast<uint32_t>(i % 6);
    auto a = gen::random_pe_structure(rng, n);
    bool naive = evaluate(a, f, {}, EvalMode::Naive);
    EXPECT_EQ(evaluate(a, f, {}, EvalMode::Memoized), naive) << render_formula(f);
    EXPECT_EQ(evaluate(a, f, {}, EvalMode::MacroSemantic), naive) << render_formula(f);
    auto e = expand_macros(f);
    EXPECT_EQ(evaluate(a, e, {}, EvalMode::Naive), naive);
    EXPECT_EQ(quantifier_rank(e), quantifier_rank(f));
  }
}

TEST(Properties, SessionMemoSurvivesRepeatedQueries) {
  std::mt19937_64 rng(13);
  auto a = gen::random_pe_structure(rng, 6);
  auto f = parse_formula("exists y. E(x,y) & (forall z. !E(y,z) | P(z))", pe_vocab());
  Evaluator session(a, EvalMode::Memoized);
  for (uint32_t x = 0; x < 6; ++x) {
    Assignment s{{Var::named("x"), x}};
    EXPECT_EQ(session.evaluate(f, s), evaluate(a, f, s, EvalMode::Naive));
  }
}

TEST(Structure, FileRoundTrip) {
  auto a = parse_structure("structure\nuniverse 3\nrelation E 2\n0 1\n1 0\nrelation P 1\n2\nend\n");
  EXPECT_EQ(a.size(), 3u);
  EXPECT_TRUE(a.holds(Rel::named("E"), std::vector<uint32_t>{1, 0}));
  auto b = parse_structure(format_structure(a));
  EXPECT_TRUE(a == b);
  EXPECT_THROW(parse_structure("structure\nuniverse 2\nrelation E 2\n0 2\nend\n"), std::runtime_error);
  EXPECT_THROW(parse_structure("structure\nuniverse 2\nrelation E 2\n0 1\n"), std::runtime_error);
}
