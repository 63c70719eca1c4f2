#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith {

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t position, const std::string& msg)
      : std::runtime_error("position " + std::to_string(position) + ": " + msg), position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

Formula parse_formula(std::string_view text, const Vocabulary& vocab);

// Macros render as name[params](args); BigOr/BigAnd render as the
// disjunction/conjunction of their children.
std::string render_formula(const Formula& f);
std::string render_term(const Term& t);

// Distinct macro instances occurring in f, each paired with the rendering
// of its declared expansion.
std::vector<std::pair<std::string, std::string>> macro_table(const Formula& f);

}  // namespace foarith
