#pragma once

#include "symop/env.hpp"
#include "symop/expr.hpp"

namespace symop {

struct LimitPoint {
  enum class Kind { PosInf, NegInf, Right, Left };
  Kind kind = Kind::PosInf;
  Expr at;  // Right / Left only

  static LimitPoint pos_inf() { return {Kind::PosInf, Expr()}; }
  static LimitPoint neg_inf() { return {Kind::NegInf, Expr()}; }
  // x -> c from above / below.
  static LimitPoint right(const Expr& c) { return {Kind::Right, c}; }
  static LimitPoint left(const Expr& c) { return {Kind::Left, c}; }
};

// One-sided limit of e(x). The result is a parameter expression or an
// infinity. Forms outside the asymptotic engine fall back to numeric
// extrapolation when e is parameter-free; otherwise Unsupported is raised.
ExtExpr limit(const Expr& e, const LimitPoint& p, const AssumptionEnv& env);

}  // namespace symop
