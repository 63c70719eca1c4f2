#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "foarith/formula.hpp"

namespace foarith {

struct HashParams {
  uint32_t p = 0;
  uint32_t q = 0;
  uint32_t k = 1;
  friend bool operator==(const HashParams&, const HashParams&) = default;
};

// (q*m mod p) mod k^2
uint32_t hash_value(const HashParams& h, uint64_t m);

bool is_prime(uint64_t x);

// Primes p with p < k^2 * log2(n), ascending.
std::vector<uint32_t> candidate_primes(uint32_t n, uint32_t k);

// k^2 <= n / log2(n)
bool size_condition(uint64_t n, uint32_t k);

// Lexicographically least (p, q), 1 <= q < p, with h_{p,q} injective on X.
std::optional<HashParams> find_hash_params(uint32_t n, uint32_t k, std::span<const uint32_t> x);

struct CccReport {
  uint32_t n = 0;
  uint32_t k = 0;
  uint64_t checked = 0;
  bool exhaustive = true;
  std::vector<std::vector<uint32_t>> failures;
};

// Checks every k-subset of {0..n-1} (or `sample` random ones) for a
// separating (p, q).
CccReport verify_ccc_lemma(uint32_t n, uint32_t k, std::optional<uint64_t> sample = std::nullopt,
                           uint64_t seed = 0);

struct ThresholdInfo {
  uint64_t n = 1;
  // false when the window was too large to check every subset and random
  // subsets were checked instead.
  bool exhaustive = true;
};

// Smallest n such that every n' in [n, 2n] satisfies the size condition and
// the hashing lemma; made monotone in k. Cached.
ThresholdInfo threshold_info(uint32_t k);
// Runs the window search; threshold_info serves k <= 7 from a frozen table of
// its results.
ThresholdInfo compute_threshold_info(uint32_t k);
uint64_t threshold_n(uint32_t k);

// The size condition and an exhaustive lemma check at exactly n. Cached.
bool chi_valid_at(uint32_t n, uint32_t k);

// Macro for h_{p,q}(y) = i with modulus k^2; declared expansion has rank 9.
Formula hash_eq_macro(Var p, Var q, Var y, uint32_t i, uint32_t k);

// Macro for x = (y mod z); rank 2.
Formula mod_macro(Var x, Var y, Var z);

// There are at least k distinct y with phi (free variables of phi other
// than y stay free). Rank max(12, qr(phi) + 3) for k >= 1; k = 0 gives true.
Formula build_chi(uint32_t k, const Formula& phi, Var y);

// Exactly l witnesses: chi^l & !chi^{l+1}.
Formula build_exact(uint32_t l, const Formula& phi, Var y);

}  // namespace foarith
