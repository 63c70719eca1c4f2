#include "foarith/color_coding.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>

#include "foarith/structure.hpp"
#include "foarith/transform.hpp"

namespace foarith {

uint32_t hash_value(const HashParams& h, uint64_t m) {
  uint64_t kk = static_cast<uint64_t>(h.k) * h.k;
  if (h.p == 0) throw std::invalid_argument("p must be positive");
  return static_cast<uint32_t>((static_cast<unsigned __int128>(h.q) * m % h.p) % kk);
}

bool is_prime(uint64_t x) {
  if (x < 2) return false;
  for (uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

std::vector<uint32_t> candidate_primes(uint32_t n, uint32_t k) {
  std::vector<uint32_t> out;
  if (n < 2) return out;
  long double bound = static_cast<long double>(k) * k * std::log2(static_cast<long double>(n));
  for (uint32_t p = 2; p < bound; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

bool size_condition(uint64_t n, uint32_t k) {
  if (k == 0) return true;
  if (n < 2) return false;
  return static_cast<long double>(k) * k * std::log2(static_cast<long double>(n)) <= static_cast<long double>(n);
}

namespace {

bool injective(uint32_t p, uint32_t q, uint32_t k, std::span<const uint32_t> x) {
  uint64_t kk = static_cast<uint64_t>(k) * k;
  std::vector<bool> used(kk, false);
  for (uint32_t m : x) {
    uint32_t h = static_cast<uint32_t>((static_cast<uint64_t>(q) * m % p) % kk);
    if (used[h]) return false;
    used[h] = true;
  }
  return true;
}

// Hash tables for all (p, q) candidates over {0..n-1}, in lexicographic order.
struct HashTable {
  uint32_t n, k;
  std::vector<std::pair<uint32_t, uint32_t>> pq;
  std::vector<uint16_t> values;  // pq.size() x n

  HashTable(uint32_t n_, uint32_t k_) : n(n_), k(k_) {
    for (uint32_t p : candidate_primes(n, k))
      for (uint32_t q = 1; q < p; ++q) pq.emplace_back(p, q);
    values.resize(pq.size() * n);
    uint64_t kk = static_cast<uint64_t>(k) * k;
    for (size_t i = 0; i < pq.size(); ++i)
      for (uint32_t m = 0; m < n; ++m)
        values[i * n + m] = static_cast<uint16_t>((static_cast<uint64_t>(pq[i].second) * m % pq[i].first) % kk);
  }

  bool separable(std::span<const uint32_t> x, std::vector<uint8_t>& seen) const {
    uint32_t kk = k * k;
    seen.assign(kk, 0);
    for (size_t i = 0; i < pq.size(); ++i) {
      const uint16_t* row = &values[i * n];
      bool ok = true;
      size_t j = 0;
      for (; j < x.size(); ++j) {
        uint16_t h = row[x[j]];
        if (seen[h]) {
          ok = false;
          ++j;
          break;
        }
        seen[h] = 1;
      }
      for (size_t t = 0; t < j; ++t) seen[row[x[t]]] = 0;
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<HashParams> find_hash_params(uint32_t n, uint32_t k, std::span<const uint32_t> x) {
  if (x.size() != k) throw std::invalid_argument("subset size must equal k");
  std::set<uint32_t> distinct(x.begin(), x.end());
  if (distinct.size() != k) throw std::invalid_argument("subset elements must be distinct");
  for (uint32_t m : x)
    if (m >= n) throw std::invalid_argument("subset element outside universe");
  if (k == 0) return std::nullopt;
  for (uint32_t p : candidate_primes(n, k))
    for (uint32_t q = 1; q < p; ++q)
      if (injective(p, q, k, x)) return HashParams{p, q, k};
  return std::nullopt;
}

CccReport verify_ccc_lemma(uint32_t n, uint32_t k, std::optional<uint64_t> sample, uint64_t seed) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  CccReport r;
  r.n = n;
  r.k = k;
  if (k == 0) {
    r.checked = 1;
    return r;
  }
  if (k * k > 65535) throw std::invalid_argument("k too large");
  HashTable table(n, k);
  std::vector<uint8_t> seen;
  std::vector<uint32_t> x(k);
  auto check = [&] {
    ++r.checked;
    if (!table.separable(x, seen)) r.failures.push_back(x);
  };
  if (sample) {
    r.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint32_t> pick(0, n - 1);
    for (uint64_t s = 0; s < *sample; ++s) {
      std::set<uint32_t> chosen;
      while (chosen.size() < k) chosen.insert(pick(rng));
      x.assign(chosen.begin(), chosen.end());
      check();
    }
    return r;
  }
  for (uint32_t i = 0; i < k; ++i) x[i] = i;
  while (true) {
    check();
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && x[i] == n - k + i) --i;
    if (i < 0) break;
    ++x[i];
    for (uint32_t j = i + 1; j < k; ++j) x[j] = x[j - 1] + 1;
  }
  return r;
}

namespace {

constexpr long double kExhaustiveWindowCap = 5e7;

long double binom(uint32_t n, uint32_t k) {
  long double c = 1;
  for (uint32_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

struct ValidityCache {
  std::mutex mu;
  std::map<std::pair<uint32_t, uint32_t>, bool> exact;
  std::map<uint32_t, ThresholdInfo> thresholds;
};

ValidityCache& cache() {
  static ValidityCache c;
  return c;
}

bool lemma_holds(uint32_t n, uint32_t k, bool exhaustive) {
  if (!size_condition(n, k)) return false;
  if (k == 0) return true;
  if (k > n) return false;
  if (exhaustive) return verify_ccc_lemma(n, k).failures.empty();
  return verify_ccc_lemma(n, k, 2000, 0x5eed0000u + n).failures.empty();
}

}  // namespace

bool chi_valid_at(uint32_t n, uint32_t k) {
  auto& c = cache();
  {
    std::lock_guard lock(c.mu);
    auto it = c.exact.find({n, k});
    if (it != c.exact.end()) return it->second;
  }
  bool ok = lemma_holds(n, k, true);
  std::lock_guard lock(c.mu);
  c.exact[{n, k}] = ok;
  return ok;
}

namespace {

// Output of compute_threshold_info for k = 0..7; the sampled window checks
// are seeded, so recomputation reproduces these.
constexpr uint64_t kFrozenThresholds[] = {1, 5, 16, 52, 109, 190, 296, 429};

uint64_t first_sized(uint32_t k) {
  uint64_t n = 2;
  while (!size_condition(n, k)) ++n;
  return n;
}

bool window_exhaustive(uint64_t n, uint32_t k) {
  return binom(static_cast<uint32_t>(2 * n), k) * (n + 1) <= kExhaustiveWindowCap;
}

}  // namespace

ThresholdInfo compute_threshold_info(uint32_t k) {
  if (k == 0) return {1, true};
  ThresholdInfo below = threshold_info(k - 1);
  uint64_t n = first_sized(k);
  bool exhaustive = window_exhaustive(n, k);
  std::map<uint64_t, bool> ok;
  auto holds = [&](uint64_t m) {
    auto it = ok.find(m);
    if (it != ok.end()) return it->second;
    bool v = exhaustive ? chi_valid_at(static_cast<uint32_t>(m), k) : lemma_holds(static_cast<uint32_t>(m), k, false);
    ok[m] = v;
    return v;
  };
  while (true) {
    uint64_t bad = 0;
    for (uint64_t m = 2 * n; m >= n; --m)
      if (!holds(m)) {
        bad = m;
        break;
      }
    if (!bad) break;
    n = bad + 1;
  }
  return {std::max(n, below.n), exhaustive && below.exhaustive};
}

ThresholdInfo threshold_info(uint32_t k) {
  auto& c = cache();
  {
    std::lock_guard lock(c.mu);
    auto it = c.thresholds.find(k);
    if (it != c.thresholds.end()) return it->second;
  }
  ThresholdInfo info;
  if (k < std::size(kFrozenThresholds)) {
    bool below = k == 0 || threshold_info(k - 1).exhaustive;
    info = {kFrozenThresholds[k], k == 0 || (below && window_exhaustive(first_sized(k), k))};
  } else {
    info = compute_threshold_info(k);
  }
  std::lock_guard lock(c.mu);
  c.thresholds[k] = info;
  return info;
}

uint64_t threshold_n(uint32_t k) { return threshold_info(k).n; }

namespace {

Formula times(Term a, Term b, Term c) { return atom(Rel::times(), {a, b, c}); }
Formula plus(Term a, Term b, Term c) { return atom(Rel::plus(), {a, b, c}); }

}  // namespace

Formula hash_eq_macro(Var p, Var q, Var y, uint32_t i, uint32_t k) {
  uint32_t kk = k * k;
  if (i >= kk) throw std::invalid_argument("hash index must be below k^2");
  std::set<Var> avoid{p, q, y};
  auto pick = [&](const char* base) {
    Var v = fresh_var(base, avoid);
    avoid.insert(v);
    return Term::var(v);
  };
  Term v = pick("v"), v1 = pick("v'"), al = pick("a");
  Term w = pick("w"), w1 = pick("w'"), be = pick("b");
  Term ga = pick("g");
  Term z = pick("z"), z1 = pick("z'");
  Term P = Term::var(p), Q = Term::var(q), Y = Term::var(y);
  Term K = Term::constant(kk), I = Term::constant(i);

  auto inner = exists(z.as_var(), exists(z1.as_var(), conj({times(z, P, z1), plus(z1, ga, Y), less(ga, P)})));
  auto gamma = exists(ga.as_var(), conj({times(Q, ga, be), inner}));
  auto alpha = exists(w.as_var(), exists(w1.as_var(), exists(be.as_var(), conj({times(w, P, w1), plus(w1, al, be),
                                                                                  less(al, P), gamma}))));
  auto expansion = exists(v.as_var(), exists(v1.as_var(), exists(al.as_var(), conj({times(v, K, v1), plus(v1, I, al),
                                                                                      less(I, K), alpha}))));
  MacroSpec spec;
  spec.name = "hashEq";
  spec.params = "k=" + std::to_string(k);
  spec.args = {P, Q, Y, I};
  spec.semantics = std::make_shared<MacroSemantics>([kk](const ArithStructure& a, std::span<const uint32_t> args) {
    uint64_t n = a.size();
    uint64_t p = args[0], q = args[1], yv = args[2], iv = args[3];
    if (p == 0) return false;
    uint64_t gamma = yv % p;
    uint64_t beta = q * gamma;
    if (beta >= n) return false;
    uint64_t alpha = beta % p;
    uint64_t kv = a.constant(kk);
    if (iv >= kv || alpha < iv) return false;
    return (alpha - iv) % kv == 0;
  });
  spec.expansion = expansion;
  return macro(std::move(spec));
}

Formula mod_macro(Var x, Var y, Var z) {
  std::set<Var> avoid{x, y, z};
  Var u = fresh_var("u", avoid);
  avoid.insert(u);
  Var u1 = fresh_var("u'", avoid);
  Term X = Term::var(x), Y = Term::var(y), Z = Term::var(z), U = Term::var(u), U1 = Term::var(u1);
  MacroSpec spec;
  spec.name = "mod";
  spec.args = {X, Y, Z};
  spec.semantics = std::make_shared<MacroSemantics>([](const ArithStructure&, std::span<const uint32_t> a) {
    return a[2] != 0 && a[0] == a[1] % a[2];
  });
  spec.expansion = exists(u, exists(u1, conj({times(U, Z, U1), plus(U1, X, Y), less(X, Z)})));
  return macro(std::move(spec));
}

Formula build_chi(uint32_t k, const Formula& phi, Var y) {
  auto avoid = variables_of(phi);
  avoid.insert(y);
  Var p = fresh_var("p", avoid);
  avoid.insert(p);
  Var q = fresh_var("q", avoid);
  uint32_t kk = k * k;
  auto witnesses = std::make_shared<std::vector<Formula>>();
  for (uint32_t i = 0; i < kk; ++i) witnesses->push_back(exists(y, conj({hash_eq_macro(p, q, y, i, k), phi})));
  auto tuples = std::make_shared<CombinationFamily>(kk, k);
  auto body = big_or(tuples, [witnesses](std::span<const uint32_t> t) {
    std::vector<Formula> parts;
    parts.reserve(t.size());
    for (uint32_t i : t) parts.push_back((*witnesses)[i]);
    return conj(std::move(parts));
  });
  return exists(p, exists(q, body));
}

Formula build_exact(uint32_t l, const Formula& phi, Var y) {
  return conj({build_chi(l, phi, y), neg(build_chi(l + 1, phi, y))});
}

}  // namespace foarith
