#pragma once

#include <map>
#include <set>
#include <string_view>

#include "foarith/formula.hpp"

namespace foarith {

// Replaces every Macro by its (recursively expanded) declared expansion.
// Returns f itself when it contains no macros.
Formula expand_macros(const Formula& f);

// Replaces BigOr/BigAnd by finitary Or/And, enumerating every child.
Formula materialize(const Formula& f);

// All variables occurring in f, free or bound, including inside macro
// expansions. Streamed uniform families contribute their first child.
std::set<Var> variables_of(const Formula& f);

// Non-built-in relations of f with their arities.
std::map<Rel, uint32_t> relations_of(const Formula& f);

// 1 + the largest constant index occurring in f (0 if none).
uint32_t constant_budget(const Formula& f);

// base, base1, base2, ... : the first not in avoid.
Var fresh_var(std::string_view base, const std::set<Var>& avoid);

// Structural node count of the formula unfolded as a tree (saturates).
uint64_t tree_size(const Formula& f, uint64_t cap = UINT64_MAX);

}  // namespace foarith
