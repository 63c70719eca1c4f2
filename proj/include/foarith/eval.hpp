#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>

#include "foarith/formula.hpp"
#include "foarith/structure.hpp"

namespace foarith {

enum class EvalMode { Naive, Memoized, MacroSemantic };

using Assignment = std::map<Var, uint32_t>;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One evaluation session over a fixed structure. The memo table survives
// across evaluate() calls on the same session.
class Evaluator {
 public:
  // timeout_s <= 0 disables the deadline.
  Evaluator(const ArithStructure& a, EvalMode mode, double timeout_s = 0);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  bool evaluate(const Formula& f, const Assignment& a = {});
  uint64_t steps() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool evaluate(const ArithStructure& a, const Formula& f, const Assignment& asg = {},
              EvalMode mode = EvalMode::Memoized);

// Default per-instance timeout from FOARITH_TIMEOUT_S (0 when unset).
double env_timeout_seconds();

}  // namespace foarith
