#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace foarith {

// Base-n digits, most significant first.
struct TupleNum {
  uint32_t n = 1;
  std::vector<uint32_t> digits;

  static TupleNum make(uint32_t n, std::vector<uint32_t> digits);
  static TupleNum zero(uint32_t n, uint32_t s);
  uint32_t width() const { return static_cast<uint32_t>(digits.size()); }
  friend bool operator==(const TupleNum&, const TupleNum&) = default;
};

struct ExceedParams {
  uint32_t e = 0;
  uint32_t l = 0;
  uint32_t t = 0;
};

// e is least with e*e >= n, l = e - 1, and e*e = n + t. Requires n > 2.
ExceedParams exceed_params(uint32_t n);

struct ArithAudit {
  uint64_t ops = 0;
  uint64_t max_intermediate = 0;
  uint64_t violations = 0;
};

// Arithmetic over {0..n-1}^s where every primitive step (digit addition,
// subtraction and product) stays below n. Digit products a*b are produced
// through the e/l/t decomposition; n <= 2 uses a direct table.
class TupleArith {
 public:
  explicit TupleArith(uint32_t n);

  uint32_t n() const { return n_; }
  const ExceedParams& params() const { return p_; }
  const ArithAudit& audit() const { return audit_; }

  // a*b as (hi, lo) base-n digits.
  std::pair<uint32_t, uint32_t> mul_base(uint32_t a, uint32_t b);
  std::optional<TupleNum> add(const TupleNum& x, const TupleNum& y);
  std::optional<TupleNum> mul(const TupleNum& x, const TupleNum& y);

 private:
  using Pair = std::pair<uint32_t, uint32_t>;

  uint32_t note(uint64_t v);
  uint32_t sub(uint32_t a, uint32_t b);
  uint32_t plus(uint32_t a, uint32_t b);
  uint32_t times(uint32_t a, uint32_t b);
  // (carry, digit) of a + b.
  std::pair<bool, uint32_t> add_digit(uint32_t a, uint32_t b);
  std::optional<Pair> add_pair(Pair x, Pair y);
  Pair must(std::optional<Pair> p);

  Pair small_e(uint32_t d);
  Pair small_t(uint32_t d);
  Pair small_e2(uint32_t d);
  Pair big_e(uint32_t d);
  Pair big_t(uint32_t d);
  std::optional<Pair> big_e2(uint32_t d);

  uint32_t n_;
  ExceedParams p_;
  uint32_t t1_ = 0, t2_ = 0, t_half_ = 0, t_odd_ = 0;
  std::vector<std::optional<Pair>> memo_e_, memo_t_, memo_e2_;
  ArithAudit audit_;
};

std::pair<uint32_t, uint32_t> mul_base(uint32_t n, uint32_t a, uint32_t b);
std::optional<TupleNum> tuple_add(const TupleNum& x, const TupleNum& y);
std::optional<TupleNum> tuple_mul(const TupleNum& x, const TupleNum& y);
std::strong_ordering lex_compare(const TupleNum& x, const TupleNum& y);

// Process-wide count of intermediate values that reached n.
uint64_t overflow_audit_count();

}  // namespace foarith
