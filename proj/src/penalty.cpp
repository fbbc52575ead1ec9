#include "symop/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "symop/calculus.hpp"
#include "symop/conv.hpp"
#include "symop/oracle.hpp"
#include "symop/simplify.hpp"

namespace symop {

namespace {

Expr half_square() { return Expr::div(Expr::pow(Expr::var(), 2), Expr::integer(2)); }

std::set<std::string> params_of(const MonotoneOperator& t) {
  std::set<std::string> ps;
  for (const auto& b : t.breakpoints) ps.merge(b.params());
  for (const auto& p : t.pieces)
    if (!p.is_empty()) ps.merge(p.body.params());
  return ps;
}

std::optional<Expr> fixed_point(const MonotoneOperator& t) {
  const auto& bps = t.breakpoints;
  for (std::size_t i = t.pieces.size(); i-- > 0;) {
    const OpPiece& p = t.pieces[i];
    if (!p.is_empty() && simplify(p.body - Expr::var()).is_zero())
      return representative_point(i == 0 ? ExtExpr::neg_inf() : ExtExpr(bps[i - 1]),
                                  i == bps.size() ? ExtExpr::pos_inf() : ExtExpr(bps[i]));
    if (i == 0) break;
    const SetValue& v = t.values[i - 1];
    const Expr& b = bps[i - 1];
    if (v.is_empty()) continue;
    auto below = [&](const ExtExpr& lo) {
      if (lo.is_neg_inf()) return true;
      if (lo.is_pos_inf()) return false;
      Ordering o = t.env.compare(lo.expr(), b);
      return o == Ordering::Less || o == Ordering::Equal;
    };
    auto above = [&](const ExtExpr& hi) {
      if (hi.is_pos_inf()) return true;
      if (hi.is_neg_inf()) return false;
      Ordering o = t.env.compare(b, hi.expr());
      return o == Ordering::Less || o == Ordering::Equal;
    };
    if (below(v.lo()) && above(v.hi())) return b;
  }
  return std::nullopt;
}

Expr value_at(const PiecewiseFunction& f, const Expr& x) {
  Location loc = locate(f.breakpoints, x, f.env);
  if (loc.at_breakpoint) {
    if (!f.values[loc.index].is_finite()) throw Error(ErrorCode::Internal, "penalty is infinite at a fixed point");
    return f.values[loc.index].expr();
  }
  const Piece& p = f.pieces[loc.index];
  if (p.is_infinite()) throw Error(ErrorCode::Internal, "penalty is infinite at a fixed point");
  return simplify(substitute(p.body, x));
}

}  // namespace

PiecewiseFunction recover_penalty(const MonotoneOperator& t) {
  MonotoneOperator ext = maximal_extension(t);
  PiecewiseFunction h = integ(ext);
  PiecewiseFunction hs = conjugate(h);
  PiecewiseFunction f = add_expr(hs, -half_square());
  f.weakly_convex = true;
  // f vanishes at the rightmost fixed point x0 in ext(x0) that can be found.
  if (auto x0 = fixed_point(ext)) {
    Expr c = value_at(f, *x0);
    if (!c.is_zero()) f = add_expr(f, -c);
  }
  return f;
}

PenaltyReport verify_penalty(const MonotoneOperator& t, const PiecewiseFunction& f, double tol) {
  PiecewiseFunction g = add_expr(f, half_square());
  g.weakly_convex = false;
  MonotoneOperator p = invert(subdifferential(g));
  std::set<std::string> ps = params_of(t);
  ps.merge(params_of(p));
  NumericParams np = to_numeric(merge(t.env, f.env).witness(ps));

  std::size_t cells = t.pieces.size();
  std::size_t per_cell = std::max<std::size_t>(1, (500 - std::min<std::size_t>(250, 3 * t.breakpoints.size())) / cells);
  std::vector<oracle::GraphPoint> pts = oracle::sample_graph(t, per_cell, np);
  PenaltyReport rep;
  for (const auto& pt : pts) {
    NumericSet s = eval_op_double(p, pt.x, np);
    double v = s.empty() ? INFINITY : std::max({0.0, s.lo - pt.u, pt.u - s.hi});
    ++rep.samples;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.witness_x = pt.x;
      rep.witness_u = pt.u;
    }
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

}  // namespace symop
