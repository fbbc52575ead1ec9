#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "symop/env.hpp"
#include "symop/error.hpp"
#include "symop/expr.hpp"

namespace symop {

struct Piece {
  enum class Kind { Affine, StrictlyConvex, Infinite };
  Kind kind = Kind::Infinite;
  Expr body;  // unused when infinite

  static Piece infinite() { return Piece{}; }
  static Piece finite(const Expr& e) { return Piece{Kind::StrictlyConvex, e}; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

const char* kind_name(Piece::Kind k);

// Convex lsc function given by finitely many pieces. Piece i lives on
// (breakpoints[i-1], breakpoints[i]) with -inf / +inf at the ends; values[i]
// is the value at breakpoints[i] (finite or +inf).
struct PiecewiseFunction {
  std::string var = "x";
  std::vector<Expr> breakpoints;
  std::vector<Piece> pieces;
  std::vector<ExtExpr> values;
  AssumptionEnv env;
  bool numeric = false;  // some piece is only known by quadrature or root finding
  bool weakly_convex = false;  // only f + x^2/2 is required to be convex

  bool everywhere_infinite() const;
  // One-sided limit of piece i at its left (right == false) or right end.
  ExtExpr piece_limit(std::size_t i, bool right_end) const;
};

struct ClassificationReport {
  std::vector<Piece::Kind> kinds;
  std::vector<std::string> checks;
  bool everywhere_infinite = false;
};

// NonConvex with a witness triple x0 < x1 < x2 (evaluated at the witness
// parameter assignment) where the midpoint test fails.
class NonConvexError : public Error {
 public:
  NonConvexError(const std::string& message, std::array<double, 3> witness)
      : Error(ErrorCode::NonConvex, message), witness_(witness) {}
  const std::array<double, 3>& witness() const { return witness_; }

 private:
  std::array<double, 3> witness_;
};

// Fills in piece kinds and checks ordering, per-piece convexity, lsc,
// continuity on the domain, slope monotonicity at breakpoints and convexity
// of the domain.
ClassificationReport validate(PiecewiseFunction& f);

// Builds a function from pieces; missing breakpoint values default to the
// continuous extension. Adjacent equal pieces are merged, then validated.
PiecewiseFunction make_pwf(std::vector<Expr> breakpoints, std::vector<Piece> pieces,
                           std::vector<std::optional<ExtExpr>> values, const AssumptionEnv& env);

// Pointwise f + g for a finite expression g (no validation; flags copied).
PiecewiseFunction add_expr(const PiecewiseFunction& f, const Expr& g);

// pw{ guard -> expr | inf ; ... } or a bare expression on the whole line.
// abs(affine) is eliminated by splitting at its root.
PiecewiseFunction parse_pwf(std::string_view text, const AssumptionEnv& env, const ParseOptions& options = {});

ExtReal eval_pwf(const PiecewiseFunction& f, const ExtReal& x, const ExactParams& params = {});
double eval_pwf_double(const PiecewiseFunction& f, double x, const NumericParams& params);

struct Interval {
  bool empty = false;
  ExtExpr lo = ExtExpr::neg_inf(), hi = ExtExpr::pos_inf();
  bool lo_closed = false, hi_closed = false;
  std::string str(std::string_view var = "x") const;
};

Interval domain(const PiecewiseFunction& f);

// Index of the piece containing x or, via `at_breakpoint`, the breakpoint
// equal to x. UndecidableComparison when x cannot be placed.
struct Location {
  bool at_breakpoint = false;
  std::size_t index = 0;
};
Location locate(const std::vector<Expr>& breakpoints, const Expr& x, const AssumptionEnv& env);

std::string to_string(const PiecewiseFunction& f);

}  // namespace symop
