#pragma once

#include <string_view>

#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop {

// A real random variable given by its distribution function F (as a monotone
// map, jumps allowed) or by its quantile function Q on (0, 1).
struct DistributionSpec {
  enum class Kind { Cdf, Quantile };
  Kind kind = Kind::Cdf;
  MonotoneOperator cdf;  // Cdf: F with jump intervals; Quantile: Q on (0, 1) in the variable p
  AssumptionEnv env;
};

// Accepts "sd{...}", "pw{...}" (same branches, bare expression bodies) or a
// bare expression. InvalidDistribution when F is not a distribution function.
DistributionSpec cdf_distribution(std::string_view text, const AssumptionEnv& env, const ParseOptions& options = {});
// Q(p) as an expression in `p` (or options.var when set to something else).
DistributionSpec quantile_distribution(std::string_view text, const AssumptionEnv& env,
                                       const ParseOptions& options = {"p", std::nullopt});

// x -> E[max(x, X)], pinned by E(x) - x -> 0 at +inf.
PiecewiseFunction superexpectation(const DistributionSpec& d);
// Conjugate of the superexpectation, a function of p in [0, 1].
PiecewiseFunction superexpectation_conjugate(const DistributionSpec& d);
MonotoneOperator superdistribution(const DistributionSpec& d);

ExtExpr superquantile(const DistributionSpec& d, const Expr& p);
ExtExpr quantile(const DistributionSpec& d, const Expr& p);
ExtExpr cvar(const DistributionSpec& d, const Expr& p);

}  // namespace symop
