#pragma once

#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop {

// Convex antiderivative of a monotone operator: finite and continuous on the
// hull of dom t, +inf outside its closure, f(anchor) = anchor_value. Pieces
// without an elementary antiderivative become quadrature pieces.
PiecewiseFunction integ(const MonotoneOperator& t, const Expr& anchor, const ExtExpr& anchor_value);
// Anchored at a point of dom t with value 0.
PiecewiseFunction integ(const MonotoneOperator& t);
Expr domain_point(const MonotoneOperator& t);

PiecewiseFunction conjugate(const PiecewiseFunction& f);
PiecewiseFunction biconjugate(const PiecewiseFunction& f);

}  // namespace symop
