#pragma once

#include <optional>
#include <utility>

#include "symop/env.hpp"
#include "symop/expr.hpp"

namespace symop {

// Symbolic derivative, simplified. Unsupported when e contains abs.
Expr differentiate(const Expr& e);

// Locates the integration interval so that logarithms of affine terms get the
// right sign: `point` lies inside the interval.
struct IntervalHint {
  Expr point;
  const AssumptionEnv* env = nullptr;
};

// Antiderivative with zero constant in canonical form. NonElementary when e
// falls outside the supported family.
Expr antiderivative(const Expr& e, const std::optional<IntervalHint>& hint = std::nullopt);

// A point strictly inside (lo, hi): the midpoint, or one unit inside a
// half-line, or 0 for the whole line.
Expr representative_point(const ExtExpr& lo, const ExtExpr& hi);

// Finite sampling window for (lo, hi) under numeric parameters; unbounded
// sides are clipped 40 units out.
std::pair<double, double> sample_window(const ExtExpr& lo, const ExtExpr& hi, const NumericParams& params);

// n Chebyshev points strictly inside [a, b], ascending.
std::vector<double> chebyshev_points(double a, double b, int n);

struct InverseResult {
  enum class Kind { Symbolic, Implicit };
  Kind kind = Kind::Symbolic;
  Expr g;  // in the variable y (printed with the variable name of the caller)
  bool increasing = true;
  ExtExpr image_lo, image_hi;  // open image interval
};

// Inverse of e on the open interval (lo, hi), where e is strictly monotone.
InverseResult invert_monotone(const Expr& e, const ExtExpr& lo, const ExtExpr& hi, const AssumptionEnv& env);

}  // namespace symop
