#pragma once

#include <string_view>
#include <vector>

#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop {

// f(x) = sum_j f_j(x_j).
struct SeparableFunction {
  std::vector<PiecewiseFunction> coords;
};

// Coordinates separated by ";;".
SeparableFunction parse_separable(std::string_view text, const AssumptionEnv& env, const ParseOptions& options = {});

SeparableFunction separable_conjugate(const SeparableFunction& f);
// DimensionMismatch when x has the wrong length.
std::vector<SetValue> separable_prox(const SeparableFunction& f, const Expr& lambda, const std::vector<ExtReal>& x,
                                     const ExactParams& params = {});

}  // namespace symop
