#pragma once

#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop {

// f with gph t contained in gph prox(f, 1): f = h* - x^2/2 where h integrates
// the maximal extension of t. f is weakly convex (f + x^2/2 is convex).
PiecewiseFunction recover_penalty(const MonotoneOperator& t);

struct PenaltyReport {
  bool pass = true;
  double max_violation = 0;
  std::size_t samples = 0;
  double witness_x = 0, witness_u = 0;  // worst graph point of t
};

// Samples graph points (x, u) of t and checks u in prox(f, 1)(x).
PenaltyReport verify_penalty(const MonotoneOperator& t, const PiecewiseFunction& f, double tol = 1e-9);

}  // namespace symop
