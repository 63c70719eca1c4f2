#pragma once

#include <cstdint>
#include <vector>

#include "foarith/eventual.hpp"
#include "foarith/formula.hpp"
#include "foarith/graph.hpp"

namespace foarith {

// A vertex cover of exactly k distinct vertices (false when k > n). For
// k <= n this is the same as a cover of size at most k.
bool brute_force_vc(const Graph& g, uint32_t k);
uint32_t min_vertex_cover(const Graph& g);

enum class KernelVerdict { Yes, No, Reduced };

struct KernelResult {
  KernelVerdict verdict = KernelVerdict::Reduced;
  Graph reduced;
  // kept[i] is the original name of vertex i of the reduced graph.
  std::vector<uint32_t> kept;
  int64_t k_prime = 0;
  uint32_t removed_high = 0;
};

// Claim: G has a cover of size <= k iff the reduced graph has one of size
// <= k_prime; Yes and No are decided outright.
KernelResult buss_kernelize(const Graph& g, uint32_t k);

// exists x1..xk pairwise distinct covering every edge; rank k + 2.
Formula naive_vc_sentence(uint32_t k);

// Free variable x: x has degree >= k+1.
Formula high_degree_formula(uint32_t k, Var x = Var::named("x"));
// Free variable x: x has degree <= k and a neighbour of degree <= k.
Formula uni_formula(uint32_t k, Var x = Var::named("x"));
// Graphs on {0..j-1} (edge masks over pairs in lexicographic order) with a
// cover of size <= c.
const std::vector<uint64_t>& vc_patterns(uint32_t j, uint32_t c);
Formula rho_formula(uint32_t j, uint32_t k, uint32_t l);

// Largest counting parameter used by the slice sentence for k.
uint32_t vc_max_count(uint32_t k);
uint64_t vc_threshold(uint32_t k);
// Throws BudgetExceeded for k >= 3 (pattern enumeration over 2^66 graphs).
Slice vc_slice_sentence(uint32_t k);
SliceFamily vc_family();
SliceFamily vc_total_family();

bool brute_force_deg_is(const Graph& g, uint32_t k);
Formula deg_is_slice_formula(uint32_t k);
uint64_t deg_is_threshold(uint32_t k);
Slice deg_is_slice_sentence(uint32_t k);
SliceFamily deg_is_family();
SliceFamily deg_is_total_family();

}  // namespace foarith
