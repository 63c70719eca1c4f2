#pragma once

#include <random>
#include <utility>
#include <vector>

#include "foarith/color_coding.hpp"
#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith::gen {

inline std::vector<std::pair<uint32_t, uint32_t>> random_edges(std::mt19937_64& rng, uint32_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (uint32_t u = 0; u < n; ++u)
    for (uint32_t v = u + 1; v < n; ++v)
      if (coin(rng)) e.emplace_back(u, v);
  return e;
}

// Random structure over {P/1, E/2} (E not necessarily symmetric).
inline ArithStructure random_pe_structure(std::mt19937_64& rng, uint32_t n) {
  ArithStructure a(n);
  a.declare("P", 1);
  a.declare("E", 2);
  std::bernoulli_distribution coin(0.4);
  for (uint32_t u = 0; u < n; ++u) {
    if (coin(rng)) a.add("P", {u});
    for (uint32_t v = 0; v < n; ++v)
      if (coin(rng)) a.add("E", {u, v});
  }
  return a;
}

struct FormulaGen {
  std::mt19937_64& rng;
  std::vector<Var> vars;
  uint32_t constants = 3;
  bool builtins = true;
  bool macros = false;

  uint32_t pick(uint32_t n) { return std::uniform_int_distribution<uint32_t>(0, n - 1)(rng); }

  Term term(const std::vector<Var>& scope) {
    if (scope.empty() || pick(5) == 0) return Term::constant(pick(constants));
    return Term::var(scope[pick(static_cast<uint32_t>(scope.size()))]);
  }

  Formula literal(const std::vector<Var>& scope) {
    switch (pick(builtins ? 5 : 3)) {
      case 0:
        return atom("P", {term(scope)});
      case 1:
        return atom("E", {term(scope), term(scope)});
      case 2:
        return eq(term(scope), term(scope));
      case 3:
        return less(term(scope), term(scope));
      default:
        return atom(pick(2) ? Rel::plus() : Rel::times(), {term(scope), term(scope), term(scope)});
    }
  }

  // Formula whose free variables lie in scope.
  Formula formula(uint32_t depth, std::vector<Var> scope) {
    uint32_t choice = depth == 0 ? 0 : pick(macros ? 7 : 6);
    switch (choice) {
      case 0:
        return literal(scope);
      case 1:
        return neg(formula(depth - 1, scope));
      case 2:
      case 3: {
        std::vector<Formula> kids;
        uint32_t c = 2 + pick(2);
        for (uint32_t i = 0; i < c; ++i) kids.push_back(formula(depth - 1, scope));
        return choice == 2 ? conj(kids) : disj(kids);
      }
      case 4:
      case 5: {
        Var v = vars[pick(static_cast<uint32_t>(vars.size()))];
        auto inner = scope;
        inner.push_back(v);
        auto body = formula(depth - 1, inner);
        return choice == 4 ? exists(v, body) : forall(v, body);
      }
      default: {
        if (scope.size() < 1) return literal(scope);
        Var a = scope[pick(static_cast<uint32_t>(scope.size()))];
        Var b = scope[pick(static_cast<uint32_t>(scope.size()))];
        Var c = scope[pick(static_cast<uint32_t>(scope.size()))];
        return mod_macro(a, b, c);
      }
    }
  }
};

}  // namespace foarith::gen
