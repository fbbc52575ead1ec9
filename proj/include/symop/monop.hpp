#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symop/env.hpp"
#include "symop/expr.hpp"
#include "symop/pwf.hpp"

namespace symop {

// Closed interval [lo, hi] of the extended line, or empty.
class SetValue {
 public:
  SetValue() = default;
  static SetValue empty() { return SetValue(); }
  static SetValue point(const Expr& v) { return interval(v, v); }
  static SetValue interval(const ExtExpr& lo, const ExtExpr& hi);
  static SetValue all() { return interval(ExtExpr::neg_inf(), ExtExpr::pos_inf()); }

  bool is_empty() const { return empty_; }
  bool is_point() const { return !empty_ && lo_.is_finite() && lo_ == hi_; }
  bool is_all() const { return !empty_ && lo_.is_neg_inf() && hi_.is_pos_inf(); }
  const ExtExpr& lo() const { return lo_; }
  const ExtExpr& hi() const { return hi_; }
  std::string str(std::string_view var = "x") const;
  friend bool operator==(const SetValue& a, const SetValue& b) {
    return a.empty_ == b.empty_ && (a.empty_ || (a.lo_ == b.lo_ && a.hi_ == b.hi_));
  }

 private:
  bool empty_ = true;
  ExtExpr lo_, hi_;
};

struct OpPiece {
  enum class Kind { Empty, Constant, StrictMonotone };
  Kind kind = Kind::Empty;
  Expr body;

  static OpPiece empty() { return OpPiece{}; }
  static OpPiece value(const Expr& e) { return OpPiece{Kind::StrictMonotone, e}; }
  bool is_empty() const { return kind == Kind::Empty; }
};

const char* kind_name(OpPiece::Kind k);

// Monotone set-valued map of one variable: single-valued (or empty) on the
// open cells between breakpoints, a closed interval at each breakpoint.
struct MonotoneOperator {
  std::string var = "x";
  std::vector<Expr> breakpoints;
  std::vector<OpPiece> pieces;
  std::vector<SetValue> values;
  AssumptionEnv env;
  bool numeric = false;

  ExtExpr piece_limit(std::size_t i, bool right_end) const;
};

// Classifies pieces, merges equal neighbours and checks monotonicity of the
// graph (NotMonotone). Missing breakpoint values become the hull of the
// adjacent one-sided limits.
MonotoneOperator make_operator(std::vector<Expr> breakpoints, std::vector<OpPiece> pieces,
                               std::vector<std::optional<SetValue>> values, const AssumptionEnv& env);

// sd{ guard -> {e} | {e1, e2, ...} | [lo, hi] | all | empty ; ... }, or a bare
// expression for a single-valued operator on the whole line. Finite sets are
// replaced by their hull; a bare branch expression e means {e}.
MonotoneOperator parse_operator(std::string_view text, const AssumptionEnv& env, const ParseOptions& options = {});

MonotoneOperator identity_operator(const AssumptionEnv& env);
MonotoneOperator subdifferential(const PiecewiseFunction& f);
MonotoneOperator scale(const MonotoneOperator& t, const Expr& lambda);
MonotoneOperator add(const MonotoneOperator& a, const MonotoneOperator& b);
MonotoneOperator invert(const MonotoneOperator& t);
MonotoneOperator resolvent(const MonotoneOperator& t, const Expr& lambda);
MonotoneOperator prox(const PiecewiseFunction& f, const Expr& lambda);
// Subdifferential of an antiderivative of a selection of t.
MonotoneOperator maximal_extension(const MonotoneOperator& t);

SetValue eval_op(const MonotoneOperator& t, const ExtReal& x, const ExactParams& params = {});

// Numeric view of a SetValue: lo > hi means empty.
struct NumericSet {
  double lo, hi;
  bool empty() const { return lo > hi; }
};
NumericSet eval_op_double(const MonotoneOperator& t, double x, const NumericParams& params);

std::string to_string(const MonotoneOperator& t);

}  // namespace symop
