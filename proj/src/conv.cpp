#include "symop/conv.hpp"

#include <algorithm>

#include "symop/calculus.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

namespace symop {

namespace {

ExtExpr cell_lo(const std::vector<Expr>& bps, std::size_t i) {
  return i == 0 ? ExtExpr::neg_inf() : ExtExpr(bps[i - 1]);
}
ExtExpr cell_hi(const std::vector<Expr>& bps, std::size_t i) {
  return i == bps.size() ? ExtExpr::pos_inf() : ExtExpr(bps[i]);
}

// Elements of the line in order: cell i is 2i, breakpoint k is 2k+1.
bool element_nonempty(const MonotoneOperator& t, std::size_t e) {
  return e % 2 == 0 ? !t.pieces[e / 2].is_empty() : !t.values[e / 2].is_empty();
}

std::pair<std::size_t, std::size_t> hull(const MonotoneOperator& t) {
  const std::size_t count = 2 * t.breakpoints.size() + 1;
  std::size_t first = count, last = 0;
  for (std::size_t e = 0; e < count; ++e) {
    if (!element_nonempty(t, e)) continue;
    if (first == count) first = e;
    last = e;
  }
  if (first == count) throw Error(ErrorCode::EmptyOperator, "operator has empty domain");
  for (std::size_t e = first; e <= last; ++e)
    if (!element_nonempty(t, e))
      throw Error(ErrorCode::GapInDomain, "domain of the operator is not an interval");
  return {first, last};
}

ExtExpr limit_at(const Expr& e, const Expr& b, bool from_left, const AssumptionEnv& env) {
  return limit(e, from_left ? LimitPoint::left(b) : LimitPoint::right(b), env);
}

Expr finite(const ExtExpr& v, const char* what) {
  if (!v.is_finite()) throw Error(ErrorCode::Internal, std::string("infinite limit ") + what);
  return v.expr();
}

Expr finite_member(const SetValue& s) {
  if (s.lo().is_finite() && s.hi().is_finite()) return simplify((s.lo().expr() + s.hi().expr()) / Expr::integer(2));
  if (s.lo().is_finite()) return s.lo().expr();
  if (s.hi().is_finite()) return s.hi().expr();
  return Expr();
}

Expr value_at(const PiecewiseFunction& f, const Expr& x) {
  Location loc = locate(f.breakpoints, x, f.env);
  if (loc.at_breakpoint) return finite(f.values[loc.index], "at the pin point");
  const Piece& p = f.pieces[loc.index];
  if (p.is_infinite()) throw Error(ErrorCode::ConstantPinFailure, "pin point outside the domain");
  return simplify(substitute(p.body, x));
}

}  // namespace

Expr domain_point(const MonotoneOperator& t) {
  auto [first, last] = hull(t);
  std::vector<std::size_t> cells;
  for (std::size_t e = first; e <= last; ++e)
    if (e % 2 == 0) cells.push_back(e / 2);
  if (cells.empty()) return t.breakpoints[first / 2];
  std::size_t i = cells[cells.size() / 2];
  return representative_point(cell_lo(t.breakpoints, i), cell_hi(t.breakpoints, i));
}

PiecewiseFunction integ(const MonotoneOperator& t, const Expr& anchor, const ExtExpr& anchor_value) {
  auto [first, last] = hull(t);
  if (!anchor_value.is_finite()) throw Error(ErrorCode::Domain, "anchor value must be finite");
  const auto& bps = t.breakpoints;
  const std::size_t n = bps.size();
  const AssumptionEnv& env = t.env;

  Location loc = locate(bps, anchor, env);
  std::size_t anchor_el = loc.at_breakpoint ? 2 * loc.index + 1 : 2 * loc.index;
  if (anchor_el < first || anchor_el > last) throw Error(ErrorCode::Domain, "anchor outside the domain");

  if (first == last && first % 2 == 1) {
    std::vector<Piece> pieces(n + 1, Piece::infinite());
    std::vector<std::optional<ExtExpr>> values(n, ExtExpr::pos_inf());
    values[first / 2] = anchor_value;
    PiecewiseFunction f = make_pwf(bps, pieces, values, env);
    f.var = t.var;
    return f;
  }

  bool numeric = t.numeric;
  std::vector<std::optional<Expr>> prim(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (2 * i < first || 2 * i > last) continue;
    const OpPiece& p = t.pieces[i];
    Expr r = representative_point(cell_lo(bps, i), cell_hi(bps, i));
    try {
      prim[i] = antiderivative(p.body, IntervalHint{r, &env});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonElementary && e.code() != ErrorCode::Unsupported) throw;
      prim[i] = Expr::integral(p.body, r, Expr::var());
      numeric = true;
    }
  }

  // Constant of the anchor cell, then stitched outwards for continuity.
  std::vector<Expr> c(n + 1);
  std::size_t start;
  if (loc.at_breakpoint) {
    std::size_t k = loc.index;
    bool right = 2 * (k + 1) <= last;
    start = right ? k + 1 : k;
    Expr at = finite(limit_at(*prim[start], bps[k], !right, env), "at the anchor");
    c[start] = simplify(anchor_value.expr() - at);
  } else {
    start = loc.index;
    c[start] = simplify(anchor_value.expr() - substitute(*prim[start], anchor));
  }
  for (std::size_t i = start + 1; i <= n && prim[i]; ++i) {
    Expr l = finite(limit_at(*prim[i - 1], bps[i - 1], true, env), "inside the domain");
    Expr r = finite(limit_at(*prim[i], bps[i - 1], false, env), "inside the domain");
    c[i] = simplify(c[i - 1] + l - r);
  }
  for (std::size_t i = start; i > 0 && prim[i - 1]; --i) {
    Expr r = finite(limit_at(*prim[i], bps[i - 1], false, env), "inside the domain");
    Expr l = finite(limit_at(*prim[i - 1], bps[i - 1], true, env), "inside the domain");
    c[i - 1] = simplify(c[i] + r - l);
  }

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i <= n; ++i)
    pieces.push_back(prim[i] ? Piece::finite(simplify(*prim[i] + c[i])) : Piece::infinite());
  std::vector<std::optional<ExtExpr>> values;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t e = 2 * k + 1;
    if (e + 1 < first || e > last + 1)
      values.push_back(ExtExpr::pos_inf());
    else
      values.push_back(std::nullopt);
  }
  PiecewiseFunction f = make_pwf(bps, pieces, values, env);
  f.var = t.var;
  f.numeric = f.numeric || numeric;
  return f;
}

PiecewiseFunction integ(const MonotoneOperator& t) { return integ(t, domain_point(t), Expr()); }

MonotoneOperator maximal_extension(const MonotoneOperator& t) {
  MonotoneOperator s = subdifferential(integ(t));
  s.var = t.var;
  if (s.breakpoints.size() == t.breakpoints.size() &&
      std::equal(s.breakpoints.begin(), s.breakpoints.end(), t.breakpoints.begin(),
                 [](const Expr& a, const Expr& b) { return simplify(a - b).is_zero(); }))
    for (std::size_t i = 0; i < s.pieces.size(); ++i)
      if (!s.pieces[i].is_empty() && !t.pieces[i].is_empty()) s.pieces[i] = t.pieces[i];
  return s;
}

PiecewiseFunction conjugate(const PiecewiseFunction& f) {
  if (f.everywhere_infinite()) throw Error(ErrorCode::Domain, "conjugate of an improper function");
  MonotoneOperator s = subdifferential(f);
  MonotoneOperator inv = invert(s);

  std::optional<Expr> x0, y0;
  std::vector<std::size_t> marked;
  for (std::size_t k = 0; k < s.breakpoints.size(); ++k)
    if (!s.values[k].is_empty()) marked.push_back(k);
  if (!marked.empty()) {
    std::size_t k = marked[marked.size() / 2];
    x0 = s.breakpoints[k];
    y0 = finite_member(s.values[k]);
  } else {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < s.pieces.size(); ++i)
      if (!s.pieces[i].is_empty()) cells.push_back(i);
    if (cells.empty()) throw Error(ErrorCode::ConstantPinFailure, "no finite point on the graph of the subdifferential");
    std::size_t i = cells[cells.size() / 2];
    x0 = representative_point(cell_lo(s.breakpoints, i), cell_hi(s.breakpoints, i));
    y0 = simplify(substitute(s.pieces[i].body, *x0));
  }
  Expr v = simplify(*y0 * *x0 - value_at(f, *x0));
  PiecewiseFunction g = integ(inv, *y0, v);
  // An implicit inverse evaluated at the pin point is x0.
  for (auto& p : g.pieces) {
    if (p.is_infinite() || !p.body.has_kind(Expr::Kind::Implicit)) continue;
    for (const auto& q : inv.pieces) {
      if (q.is_empty() || q.body.kind() != Expr::Kind::Implicit) continue;
      auto lo = q.body.implicit_lo();
      auto hi = q.body.implicit_hi();
      bool inside = (!lo || f.env.compare(*lo, *x0) == Ordering::Less) &&
                    (!hi || f.env.compare(*x0, *hi) == Ordering::Less);
      if (inside && simplify(substitute(q.body.arg(0), *x0) - *y0).is_zero())
        p.body = simplify(replace(p.body, substitute(q.body, *y0), *x0));
    }
  }
  g.var = inv.var;
  g.numeric = g.numeric || f.numeric;
  return g;
}

PiecewiseFunction biconjugate(const PiecewiseFunction& f) { return conjugate(conjugate(f)); }

}  // namespace symop
