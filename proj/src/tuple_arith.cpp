#include "foarith/tuple_arith.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace foarith {

namespace {

std::atomic<uint64_t> global_violations{0};

void check_same(const TupleNum& x, const TupleNum& y) {
  if (x.n != y.n) throw std::invalid_argument("tuple arithmetic: base mismatch");
  if (x.width() != y.width()) throw std::invalid_argument("tuple arithmetic: width mismatch");
}

}  // namespace

TupleNum TupleNum::make(uint32_t n, std::vector<uint32_t> digits) {
  if (n == 0) throw std::invalid_argument("TupleNum: base must be positive");
  if (digits.empty()) throw std::invalid_argument("TupleNum: width must be positive");
  for (uint32_t d : digits)
    if (d >= n) throw std::out_of_range("TupleNum: digit " + std::to_string(d) + " not below " + std::to_string(n));
  return TupleNum{n, std::move(digits)};
}

TupleNum TupleNum::zero(uint32_t n, uint32_t s) { return make(n, std::vector<uint32_t>(s, 0)); }

ExceedParams exceed_params(uint32_t n) {
  if (n <= 2) throw std::invalid_argument("exceed_params: n must exceed 2");
  auto e = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (e * e < n) ++e;
  while (e > 1 && (e - 1) * (e - 1) >= n) --e;
  uint64_t l = e - 1;
  uint64_t t = e * e - n;
  if (!(l + l <= n - 1 && l * l <= n - 1 && t < n && t == l + l - ((n - 1) - l * l)))
    throw std::logic_error("exceed_params: invariant violated at n=" + std::to_string(n));
  return {static_cast<uint32_t>(e), static_cast<uint32_t>(l), static_cast<uint32_t>(t)};
}

TupleArith::TupleArith(uint32_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("TupleArith: base must be positive");
  if (n <= 2) return;
  p_ = exceed_params(n);
  t1_ = p_.t >= p_.e ? 1 : 0;
  t2_ = t1_ ? sub(p_.t, p_.e) : p_.t;
  t_odd_ = p_.t & 1;
  t_half_ = p_.t >> 1;
  memo_e_.resize(p_.l + 1);
  memo_t_.resize(p_.l + 1);
  memo_e2_.resize(p_.l + 1);
}

uint32_t TupleArith::note(uint64_t v) {
  ++audit_.ops;
  if (v > audit_.max_intermediate) audit_.max_intermediate = v;
  if (v >= n_) {
    ++audit_.violations;
    global_violations.fetch_add(1, std::memory_order_relaxed);
  }
  return static_cast<uint32_t>(v);
}

uint32_t TupleArith::sub(uint32_t a, uint32_t b) {
  if (b > a) throw std::logic_error("tuple arithmetic: negative difference");
  return note(a - b);
}

uint32_t TupleArith::plus(uint32_t a, uint32_t b) { return note(uint64_t{a} + b); }

uint32_t TupleArith::times(uint32_t a, uint32_t b) { return note(uint64_t{a} * b); }

std::pair<bool, uint32_t> TupleArith::add_digit(uint32_t a, uint32_t b) {
  uint32_t room = sub(n_ - 1, b);
  if (a <= room) return {false, plus(a, b)};
  // a + b = n + (a - (n - b))
  return {true, sub(a, plus(room, 1))};
}

std::optional<TupleArith::Pair> TupleArith::add_pair(Pair x, Pair y) {
  auto [c, lo] = add_digit(x.second, y.second);
  auto [c1, hi] = add_digit(x.first, y.first);
  if (c1) return std::nullopt;
  if (c) {
    auto [c2, hi2] = add_digit(hi, 1);
    if (c2) return std::nullopt;
    hi = hi2;
  }
  return Pair{hi, lo};
}

TupleArith::Pair TupleArith::must(std::optional<Pair> p) {
  if (!p) throw std::logic_error("tuple arithmetic: digit product left two digits");
  return *p;
}

// d <= l throughout the small_* helpers.
TupleArith::Pair TupleArith::small_e(uint32_t d) {
  auto& m = memo_e_[d];
  if (!m) m = must(add_pair({0, times(d, p_.l)}, {0, d}));
  return *m;
}

TupleArith::Pair TupleArith::small_t(uint32_t d) {
  auto& m = memo_t_[d];
  if (!m) {
    uint32_t half = times(d, t_half_);
    m = must(add_pair(must(add_pair({0, half}, {0, half})), {0, t_odd_ ? d : 0}));
  }
  return *m;
}

TupleArith::Pair TupleArith::small_e2(uint32_t d) {
  auto& m = memo_e2_[d];
  if (!m) m = must(add_pair({d, 0}, small_t(d)));
  return *m;
}

TupleArith::Pair TupleArith::big_e(uint32_t d) {
  uint32_t d1 = d / p_.e, d2 = sub(d, times(d1, p_.e));
  return must(add_pair(small_e2(d1), small_e(d2)));
}

TupleArith::Pair TupleArith::big_t(uint32_t d) {
  uint32_t d1 = d / p_.e, d2 = sub(d, times(d1, p_.e));
  Pair acc{0, times(d2, t2_)};
  acc = must(add_pair(acc, big_e(times(d1, t2_))));
  if (t1_) {
    acc = must(add_pair(acc, small_e2(d1)));
    acc = must(add_pair(acc, small_e(d2)));
  }
  return acc;
}

std::optional<TupleArith::Pair> TupleArith::big_e2(uint32_t d) { return add_pair({d, 0}, big_t(d)); }

std::pair<uint32_t, uint32_t> TupleArith::mul_base(uint32_t a, uint32_t b) {
  if (a >= n_ || b >= n_) throw std::out_of_range("mul_base: factor not below n");
  if (n_ <= 2) return {0, a & b};
  uint32_t a1 = a / p_.e, a2 = sub(a, times(a1, p_.e));
  uint32_t b1 = b / p_.e, b2 = sub(b, times(b1, p_.e));
  Pair acc{0, times(a2, b2)};
  acc = must(add_pair(acc, must(big_e2(times(a1, b1)))));
  acc = must(add_pair(acc, big_e(times(a1, b2))));
  acc = must(add_pair(acc, big_e(times(a2, b1))));
  return acc;
}

std::optional<TupleNum> TupleArith::add(const TupleNum& x, const TupleNum& y) {
  check_same(x, y);
  if (x.n != n_) throw std::invalid_argument("tuple arithmetic: base mismatch");
  TupleNum out = x;
  bool carry = false;
  for (uint32_t i = x.width(); i-- > 0;) {
    auto [c1, d] = add_digit(x.digits[i], y.digits[i]);
    bool c2 = false;
    if (carry) std::tie(c2, d) = add_digit(d, 1);
    out.digits[i] = d;
    carry = c1 || c2;
  }
  if (carry) return std::nullopt;
  return out;
}

std::optional<TupleNum> TupleArith::mul(const TupleNum& x, const TupleNum& y) {
  check_same(x, y);
  if (x.n != n_) throw std::invalid_argument("tuple arithmetic: base mismatch");
  uint32_t s = x.width();
  TupleNum acc = TupleNum::zero(n_, s);
  for (uint32_t i = 0; i < s; ++i)
    for (uint32_t j = 0; j < s; ++j) {
      auto [hi, lo] = mul_base(x.digits[i], y.digits[j]);
      if (hi == 0 && lo == 0) continue;
      // weight of lo is n^w
      uint32_t w = (s - 1 - i) + (s - 1 - j);
      if (w >= s || (hi != 0 && w + 1 >= s)) return std::nullopt;
      TupleNum term = TupleNum::zero(n_, s);
      term.digits[s - 1 - w] = lo;
      if (hi != 0) term.digits[s - 2 - w] = hi;
      auto next = add(acc, term);
      if (!next) return std::nullopt;
      acc = std::move(*next);
    }
  return acc;
}

std::pair<uint32_t, uint32_t> mul_base(uint32_t n, uint32_t a, uint32_t b) { return TupleArith(n).mul_base(a, b); }

std::optional<TupleNum> tuple_add(const TupleNum& x, const TupleNum& y) {
  check_same(x, y);
  return TupleArith(x.n).add(x, y);
}

std::optional<TupleNum> tuple_mul(const TupleNum& x, const TupleNum& y) {
  check_same(x, y);
  return TupleArith(x.n).mul(x, y);
}

std::strong_ordering lex_compare(const TupleNum& x, const TupleNum& y) {
  check_same(x, y);
  return x.digits <=> y.digits;
}

uint64_t overflow_audit_count() { return global_violations.load(std::memory_order_relaxed); }

}  // namespace foarith
