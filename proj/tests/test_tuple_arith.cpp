#include <gtest/gtest.h>

#include <random>

#include "foarith/tuple_arith.hpp"

using namespace foarith;

namespace {

uint64_t value(const TupleNum& x) {
  uint64_t v = 0;
  for (uint32_t d : x.digits) v = v * x.n + d;
  return v;
}

TupleNum from_value(uint32_t n, uint32_t s, uint64_t v) {
  std::vector<uint32_t> d(s);
  for (uint32_t i = s; i-- > 0; v /= n) d[i] = static_cast<uint32_t>(v % n);
  return TupleNum::make(n, d);
}

uint64_t power(uint64_t n, uint32_t s) {
  uint64_t p = 1;
  while (s--) p *= n;
  return p;
}

void check_pair(TupleArith& ar, uint64_t vx, uint64_t vy, uint32_t s) {
  uint32_t n = ar.n();
  auto x = from_value(n, s, vx), y = from_value(n, s, vy);
  uint64_t cap = power(n, s);
  auto sum = ar.add(x, y);
  if (vx + vy >= cap) {
    ASSERT_FALSE(sum.has_value()) << n << " " << vx << "+" << vy;
  } else {
    ASSERT_TRUE(sum.has_value()) << n << " " << vx << "+" << vy;
    ASSERT_EQ(value(*sum), vx + vy);
  }
  auto prod = ar.mul(x, y);
  if (vx * vy >= cap) {
    ASSERT_FALSE(prod.has_value()) << n << " " << vx << "*" << vy;
  } else {
    ASSERT_TRUE(prod.has_value()) << n << " " << vx << "*" << vy;
    ASSERT_EQ(value(*prod), vx * vy);
  }
}

}  // namespace

TEST(ExceedParams, Examples) {
  auto p = exceed_params(10);
  EXPECT_EQ(p.e, 4u);
  EXPECT_EQ(p.l, 3u);
  EXPECT_EQ(p.t, 6u);
  p = exceed_params(5);
  EXPECT_EQ(p.e, 3u);
  EXPECT_EQ(p.l, 2u);
  EXPECT_EQ(p.t, 4u);
  p = exceed_params(17);
  EXPECT_EQ(p.e, 5u);
  EXPECT_EQ(p.l, 4u);
  EXPECT_EQ(p.t, 8u);
  EXPECT_THROW(exceed_params(2), std::invalid_argument);
}

TEST(ExceedParams, InvariantsUpToOneMillion) {
  for (uint32_t n = 3; n <= 1000000; ++n) {
    auto p = exceed_params(n);
    uint64_t e = p.e, l = p.l;
    ASSERT_EQ(e, l + 1);
    ASSERT_LE(l + l, n - 1);
    ASSERT_GE(e * e, n);
    ASSERT_LE(l * l, n - 1);
    ASSERT_LT(p.t, n);
    ASSERT_EQ(e * e, n + p.t);
  }
}

// Regression for the base-10 fixture: e=4, l=3, t=6 and 4*4 = (1,6).
TEST(MulBase, BaseTenFixture) {
  TupleArith ar(10);
  EXPECT_EQ(ar.params().e, 4u);
  EXPECT_EQ(ar.params().l, 3u);
  EXPECT_EQ(ar.params().t, 6u);
  EXPECT_EQ(ar.mul_base(4, 4), std::make_pair(1u, 6u));
  EXPECT_EQ(ar.audit().violations, 0u);
  EXPECT_LT(ar.audit().max_intermediate, 10u);
}

TEST(MulBase, Examples) {
  EXPECT_EQ(mul_base(5, 3, 3), std::make_pair(1u, 4u));
  EXPECT_EQ(mul_base(5, 3, 4), std::make_pair(2u, 2u));
  EXPECT_EQ(mul_base(17, 5, 5), std::make_pair(1u, 8u));
  EXPECT_THROW(mul_base(5, 3, 7), std::out_of_range);
  EXPECT_EQ(mul_base(2, 1, 1), std::make_pair(0u, 1u));
  EXPECT_EQ(mul_base(1, 0, 0), std::make_pair(0u, 0u));
}

TEST(MulBase, ExhaustiveAgainstIntegers) {
  for (uint32_t n = 1; n <= 120; ++n) {
    TupleArith ar(n);
    for (uint32_t a = 0; a < n; ++a)
      for (uint32_t b = 0; b < n; ++b) {
        auto [hi, lo] = ar.mul_base(a, b);
        ASSERT_EQ(uint64_t{hi} * n + lo, uint64_t{a} * b) << n << " " << a << " " << b;
      }
    ASSERT_EQ(ar.audit().violations, 0u) << n;
    ASSERT_LT(ar.audit().max_intermediate, n);
  }
}

TEST(MulBase, LargeBases) {
  std::mt19937_64 rng(11);
  for (uint32_t n : {1000u, 65521u, 1000003u, 4000000000u}) {
    TupleArith ar(n);
    for (int i = 0; i < 2000; ++i) {
      uint32_t a = static_cast<uint32_t>(rng() % n), b = static_cast<uint32_t>(rng() % n);
      auto [hi, lo] = ar.mul_base(a, b);
      ASSERT_EQ(uint64_t{hi} * n + lo, uint64_t{a} * b);
    }
    EXPECT_EQ(ar.audit().violations, 0u);
  }
}

TEST(TupleAdd, Examples) {
  auto r = tuple_add(TupleNum::make(10, {2, 7}), TupleNum::make(10, {1, 5}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->digits, (std::vector<uint32_t>{4, 2}));
  auto x = TupleNum::make(7, {3, 0, 6});
  EXPECT_EQ(tuple_add(x, TupleNum::zero(7, 3)), x);
  EXPECT_FALSE(tuple_add(TupleNum::make(10, {9, 9}), TupleNum::make(10, {0, 1})));
  EXPECT_THROW(tuple_add(TupleNum::make(10, {1, 2}), TupleNum::make(9, {1, 2})), std::invalid_argument);
  EXPECT_THROW(tuple_add(TupleNum::make(10, {1, 2}), TupleNum::make(10, {1, 2, 3})), std::invalid_argument);
  EXPECT_THROW(TupleNum::make(10, {10}), std::out_of_range);
}

TEST(TupleMul, Examples) {
  auto r = tuple_mul(TupleNum::make(5, {0, 3}), TupleNum::make(5, {1, 2}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->digits, (std::vector<uint32_t>{4, 1}));
  auto x = TupleNum::make(6, {2, 5, 1});
  EXPECT_EQ(tuple_mul(TupleNum::make(6, {0, 0, 1}), x), x);
  EXPECT_FALSE(tuple_mul(TupleNum::make(5, {2, 3}), TupleNum::make(5, {0, 2})));
}

TEST(LexCompare, Examples) {
  EXPECT_EQ(lex_compare(TupleNum::make(4, {0, 1}), TupleNum::make(4, {1, 0})), std::strong_ordering::less);
  EXPECT_EQ(lex_compare(TupleNum::make(4, {2, 3}), TupleNum::make(4, {2, 3})), std::strong_ordering::equal);
  for (uint64_t u = 0; u < 16; ++u)
    for (uint64_t v = 0; v < 16; ++v) ASSERT_EQ(lex_compare(from_value(4, 2, u), from_value(4, 2, v)), u <=> v);
}

TEST(TupleArith, ExhaustiveSmallBases) {
  for (uint32_t n = 1; n <= 12; ++n) {
    TupleArith ar(n);
    for (uint32_t s : {2u, 3u}) {
      uint64_t cap = power(n, s);
      if (cap * cap > 400000) continue;
      for (uint64_t u = 0; u < cap; ++u)
        for (uint64_t v = 0; v < cap; ++v) check_pair(ar, u, v, s);
    }
    for (uint64_t u = 0; u < uint64_t{n} * n; ++u)
      for (uint64_t v = 0; v < uint64_t{n} * n; ++v) check_pair(ar, u, v, 2);
    ASSERT_EQ(ar.audit().violations, 0u) << n;
  }
}

TEST(TupleArith, RandomAgainstIntegers) {
  std::mt19937_64 rng(12);
  for (uint32_t n = 3; n <= 40; ++n)
    for (uint32_t s : {2u, 3u}) {
      TupleArith ar(n);
      uint64_t cap = power(n, s);
      for (int i = 0; i < 10000; ++i) {
        uint64_t u = rng() % cap, v = rng() % cap;
        // bias half of the pairs toward products near the overflow boundary
        if (i & 1) v = rng() % (cap / std::max<uint64_t>(u, 1) + 2) % cap;
        check_pair(ar, u, v, s);
      }
      ASSERT_EQ(ar.audit().violations, 0u);
      ASSERT_LT(ar.audit().max_intermediate, n);
    }
}

// Registered last so it reads the counter after every other test in the binary.
TEST(ZZOverflowAudit, CounterIsZero) { EXPECT_EQ(overflow_audit_count(), 0u); }
