#pragma once

#include <cstdint>
#include <vector>

#include "symop/monop.hpp"
#include "symop/pwf.hpp"

// Brute-force numeric checks. They only evaluate functions and operators
// pointwise and never call the symbolic machinery.
namespace symop::oracle {

// max over n uniformly spaced x in [lo, hi] of y*x - f(x).
// WindowOutsideDomain when f is +inf on every grid point.
double grid_conjugate(const PiecewiseFunction& f, double y, double lo, double hi, std::size_t n,
                      const NumericParams& params = {});

// argmin_u f(u) + (u - x)^2 / (2 lambda) by golden-section search.
double numeric_prox(const PiecewiseFunction& f, double x, double lambda, double tol = 1e-9,
                    const NumericParams& params = {});

struct GraphPoint {
  double x, u;
};

// Points (x, u) with u in t(x): interior points of every cell meeting the
// window and, at each breakpoint, the finite ends and midpoint of the value
// (a half-line contributes its end and points 1 and 10 units along it).
std::vector<GraphPoint> sample_graph(const MonotoneOperator& t, std::size_t per_cell, const NumericParams& params = {},
                                     double lo = -10, double hi = 10);

struct MonotonicityReport {
  double min_product = 0;  // min over pairs of (x1 - x2)(u1 - u2)
  GraphPoint a{0, 0}, b{0, 0};
  std::size_t pairs = 0;
};

MonotonicityReport monotonicity_check(const MonotoneOperator& t, std::size_t n_pairs, const NumericParams& params = {},
                                      std::uint64_t seed = 0xC0FFEE);

}  // namespace symop::oracle
