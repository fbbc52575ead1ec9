#include "symop/calculus.hpp"

#include <cmath>
#include <numbers>

#include "symop/error.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

namespace symop {

namespace {

Expr d(const Expr& e) {
  using K = Expr::Kind;
  if (!e.has_var()) return Expr();
  switch (e.kind()) {
    case K::Var: return Expr::integer(1);
    case K::Neg: return Expr::neg(d(e.arg(0)));
    case K::Add: return Expr::add(d(e.arg(0)), d(e.arg(1)));
    case K::Sub: return Expr::sub(d(e.arg(0)), d(e.arg(1)));
    case K::Mul:
      return Expr::add(Expr::mul(d(e.arg(0)), e.arg(1)), Expr::mul(e.arg(0), d(e.arg(1))));
    case K::Div:
      return Expr::div(Expr::sub(Expr::mul(d(e.arg(0)), e.arg(1)), Expr::mul(e.arg(0), d(e.arg(1)))),
                       Expr::pow(e.arg(1), 2));
    case K::Pow: {
      const Rational& r = e.exponent();
      return Expr::mul(Expr::mul(Expr::rational(r), Expr::pow(e.arg(0), r - 1)), d(e.arg(0)));
    }
    case K::Exp: return Expr::mul(e, d(e.arg(0)));
    case K::Ln: return Expr::div(d(e.arg(0)), e.arg(0));
    case K::Abs: throw Error(ErrorCode::Unsupported, "derivative of abs (split the piece first)");
    case K::Implicit: {
      Expr fprime = simplify(d(e.arg(0)));
      return Expr::div(d(e.arg(1)), substitute(fprime, e));
    }
    case K::Integral: return Expr::mul(substitute(e.arg(0), e.arg(2)), d(e.arg(2)));
    default: return Expr();
  }
}

[[noreturn]] void non_elementary(const Expr& e) {
  throw Error(ErrorCode::NonElementary, "no elementary antiderivative found for " + e.str());
}

std::optional<int> sign_at(const Expr& u, const std::optional<IntervalHint>& hint) {
  if (!hint) return std::nullopt;
  Expr v = simplify(substitute(u, hint->point));
  if (hint->env) return hint->env->try_sign(v);
  return AssumptionEnv().try_sign(v);
}

// ln|u| with the sign resolved when possible.
Expr log_abs(const Expr& u, const std::optional<IntervalHint>& hint) {
  auto s = sign_at(u, hint);
  if (s && *s > 0) return Expr::ln(u);
  if (s && *s < 0) return Expr::ln(Expr::neg(u));
  return Expr::ln(Expr::abs(u));
}

std::optional<std::pair<Expr, Expr>> affine_in_x(const Expr& u) {
  auto lin = as_linear(u);
  if (!lin || lin->first.is_zero()) return std::nullopt;
  return lin;
}

Expr integrate_term(const Poly::Term& term, const std::optional<IntervalHint>& hint);

Expr integrate_poly(const Poly& p, const std::optional<IntervalHint>& hint) {
  Expr acc;
  for (const auto& t : p.terms()) acc = Expr::add(acc, integrate_term(t, hint));
  return acc;
}

Expr integrate_term(const Poly::Term& term, const std::optional<IntervalHint>& hint) {
  Poly coef = Poly::constant(term.coef);
  Rational a = 0;
  Poly::Monomial rest;
  for (const auto& f : term.mono) {
    if (f.base.kind() == Expr::Kind::Var)
      a += f.exp;
    else if (!f.base.has_var())
      coef = coef * Poly::atom(f.base, f.exp);
    else
      rest.push_back(f);
  }
  Expr c = coef.to_expr();
  Expr x = Expr::var();
  Poly whole_p = Poly::constant(term.coef);
  for (const auto& f : term.mono) whole_p = whole_p * Poly::atom(f.base, f.exp);
  Expr whole = whole_p.to_expr();

  if (rest.empty()) {
    if (a == -1) return Expr::mul(c, log_abs(x, hint));
    return Expr::mul(c, Expr::div(Expr::pow(x, a + 1), Expr::rational(a + 1)));
  }
  // abs of something with known sign on the interval
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i].base.kind() != Expr::Kind::Abs) continue;
    auto s = sign_at(rest[i].base.arg(0), hint);
    if (!s || *s == 0) non_elementary(whole);
    Expr inner = *s > 0 ? rest[i].base.arg(0) : Expr::neg(rest[i].base.arg(0));
    Expr replaced = Expr::integer(1);
    for (std::size_t j = 0; j < term.mono.size(); ++j) {
      const auto& f = term.mono[j];
      Expr b = f.base.kind() == Expr::Kind::Abs && f.base == rest[i].base ? inner : f.base;
      replaced = Expr::mul(replaced, Expr::pow(b, f.exp));
    }
    return integrate_poly(Poly::from(Expr::mul(Expr::number(term.coef), replaced)), hint);
  }
  if (rest.size() != 1) non_elementary(whole);
  const Expr& base = rest[0].base;
  const Rational& r = rest[0].exp;
  using K = Expr::Kind;
  switch (base.kind()) {
    case K::Exp: {
      auto lin = affine_in_x(base.arg(0));
      if (!lin || r != 1 || sgn(a) < 0 || a.get_den() != 1) non_elementary(whole);
      const Expr& alpha = lin->first;
      long n = a.get_num().get_si();
      // sum_k (-1)^k n!/(n-k)! x^(n-k) / alpha^(k+1)
      Expr sum;
      Rational falling = 1;
      for (long k = 0; k <= n; ++k) {
        Expr t = Expr::div(Expr::mul(Expr::rational(k % 2 == 0 ? falling : -falling), Expr::pow(x, n - k)),
                           Expr::pow(alpha, k + 1));
        sum = Expr::add(sum, t);
        falling *= (n - k);
      }
      return Expr::mul(c, Expr::mul(base, sum));
    }
    case K::Ln: {
      auto lin = affine_in_x(base.arg(0));
      if (!lin || r != 1) non_elementary(whole);
      const Expr& u = base.arg(0);
      const Expr& alpha = lin->first;
      if (a == 0) return Expr::mul(c, Expr::div(Expr::sub(Expr::mul(u, base), u), alpha));
      if (!lin->second.is_zero()) non_elementary(whole);
      if (a == -1) return Expr::mul(c, Expr::div(Expr::pow(base, 2), Expr::integer(2)));
      Rational m = a + 1;
      return Expr::mul(c, Expr::sub(Expr::div(Expr::mul(Expr::pow(x, m), base), Expr::rational(m)),
                                    Expr::div(Expr::pow(x, m), Expr::rational(m * m))));
    }
    case K::Implicit: {
      auto lin = affine_in_x(base.arg(1));
      if (!lin || r != 1 || a != 0) non_elementary(whole);
      std::optional<IntervalHint> inner_hint;
      auto lo = base.implicit_lo();
      auto hi = base.implicit_hi();
      inner_hint = IntervalHint{representative_point(lo ? ExtExpr(*lo) : ExtExpr::neg_inf(),
                                                     hi ? ExtExpr(*hi) : ExtExpr::pos_inf()),
                                hint ? hint->env : nullptr};
      Expr F = antiderivative(base.arg(0), inner_hint);
      const Expr& u = base.arg(1);
      // d/dy [y g(y) - F(g(y))] = g(y) when g inverts F'
      return Expr::mul(c, Expr::div(Expr::sub(Expr::mul(u, base), substitute(F, base)), lin->first));
    }
    default: {
      if (a != 0) non_elementary(whole);
      auto lin = affine_in_x(base);
      if (!lin) non_elementary(whole);
      if (r == -1) return Expr::mul(c, Expr::div(log_abs(base, hint), lin->first));
      return Expr::mul(c, Expr::div(Expr::pow(base, r + 1), Expr::mul(Expr::rational(r + 1), lin->first)));
    }
  }
}

}  // namespace

Expr differentiate(const Expr& e) { return simplify(d(e)); }

Expr antiderivative(const Expr& e, const std::optional<IntervalHint>& hint) {
  return simplify(integrate_poly(Poly::from(e), hint));
}

Expr representative_point(const ExtExpr& lo, const ExtExpr& hi) {
  if (lo.is_finite() && hi.is_finite()) return simplify(Expr::div(Expr::add(lo.expr(), hi.expr()), Expr::integer(2)));
  if (lo.is_finite()) return simplify(Expr::add(lo.expr(), Expr::integer(1)));
  if (hi.is_finite()) return simplify(Expr::sub(hi.expr(), Expr::integer(1)));
  return Expr();
}

std::pair<double, double> sample_window(const ExtExpr& lo, const ExtExpr& hi, const NumericParams& params) {
  constexpr double kReach = 40.0;
  double a = lo.is_finite() ? eval_double(lo.expr(), 0, params) : NAN;
  double b = hi.is_finite() ? eval_double(hi.expr(), 0, params) : NAN;
  if (std::isnan(a) && std::isnan(b)) return {-kReach, kReach};
  if (std::isnan(a)) return {b - kReach, b};
  if (std::isnan(b)) return {a, a + kReach};
  return {a, b};
}

std::vector<double> chebyshev_points(double a, double b, int n) {
  std::vector<double> xs;
  for (int k = n - 1; k >= 0; --k) {
    double c = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    xs.push_back((a + b) / 2 + (b - a) / 2 * c);
  }
  return xs;
}

namespace {

const char* const kY = "\x02y";

bool positive_on(const Expr& u, const ExtExpr& lo, const ExtExpr& hi, const AssumptionEnv& env, int& sign) {
  auto s = env.try_sign(simplify(substitute(u, representative_point(lo, hi))));
  if (!s || *s == 0) return false;
  sign = *s;
  return true;
}

// Solve u(x) = w for x, w an expression in the placeholder kY.
std::optional<Expr> solve(const Expr& u, const Expr& w, const ExtExpr& lo, const ExtExpr& hi,
                          const AssumptionEnv& env, int depth = 0) {
  if (depth > 12) return std::nullopt;
  if (auto lin = affine_in_x(u)) {
    return simplify(Expr::div(Expr::sub(w, lin->second), lin->first));
  }
  Poly p = Poly::from(u);
  Poly fixed, moving;
  for (const auto& t : p.terms()) {
    Poly tp = Poly::constant(t.coef);
    for (const auto& f : t.mono) tp = tp * Poly::atom(f.base, f.exp);
    bool dep = false;
    for (const auto& f : t.mono) dep = dep || f.base.has_var();
    if (dep)
      moving = moving + tp;
    else
      fixed = fixed + tp;
  }
  if (moving.terms().size() != 1) return std::nullopt;
  const auto& term = moving.terms()[0];
  Poly coef = Poly::constant(term.coef);
  std::vector<Poly::Factor> dep;
  for (const auto& f : term.mono) {
    if (f.base.has_var())
      dep.push_back(f);
    else
      coef = coef * Poly::atom(f.base, f.exp);
  }
  if (dep.size() != 1) return std::nullopt;
  const Expr& base = dep[0].base;
  const Rational& r = dep[0].exp;
  // base^r = (w - fixed) / coef
  Expr rhs = simplify(Expr::div(Expr::sub(w, fixed.to_expr()), coef.to_expr()));
  using K = Expr::Kind;
  switch (base.kind()) {
    case K::Exp:
      if (r != 1) return std::nullopt;
      return solve(base.arg(0), Expr::ln(rhs), lo, hi, env, depth + 1);
    case K::Ln:
      if (r != 1) return std::nullopt;
      return solve(base.arg(0), Expr::exp(rhs), lo, hi, env, depth + 1);
    case K::Implicit:
      if (r != 1) return std::nullopt;
      return solve(base.arg(1), simplify(substitute(base.arg(0), rhs)), lo, hi, env, depth + 1);
    case K::Abs:
    case K::Integral: return std::nullopt;
    default: {
      Expr root = Expr::pow(rhs, 1 / r);
      if (mpz_even_p(r.get_num_mpz_t())) {
        int s = 0;
        if (!positive_on(base, lo, hi, env, s)) return std::nullopt;
        if (s < 0) root = Expr::neg(root);
      }
      return solve(base, simplify(root), lo, hi, env, depth + 1);
    }
  }
}

}  // namespace

InverseResult invert_monotone(const Expr& e, const ExtExpr& lo, const ExtExpr& hi, const AssumptionEnv& env) {
  std::set<std::string> names = e.params();
  if (lo.is_finite()) names.merge(lo.expr().params());
  if (hi.is_finite()) names.merge(hi.expr().params());
  NumericParams np = to_numeric(env.witness(names));
  auto [a, b] = sample_window(lo, hi, np);

  std::optional<Expr> deriv;
  try {
    deriv = differentiate(e);
  } catch (const Error&) {
  }
  int pos = 0, neg = 0;
  std::vector<double> xs = chebyshev_points(a, b, 33);
  double prev = NAN;
  for (double x : xs) {
    double s = NAN;
    try {
      if (deriv) {
        s = eval_double(*deriv, x, np);
      } else {
        double v = eval_double(e, x, np);
        if (!std::isnan(prev)) s = v - prev;
        prev = v;
      }
    } catch (const Error&) {
      continue;
    }
    if (std::isnan(s)) continue;
    if (s > 0) ++pos;
    if (s < 0) ++neg;
  }
  if ((pos > 0 && neg > 0) || pos + neg == 0)
    throw Error(ErrorCode::NotMonotone, e.str() + " is not strictly monotone on the interval");

  InverseResult out;
  out.increasing = pos > 0;
  ExtExpr at_lo = lo.is_finite() ? limit(e, LimitPoint::right(lo.expr()), env) : limit(e, LimitPoint::neg_inf(), env);
  ExtExpr at_hi = hi.is_finite() ? limit(e, LimitPoint::left(hi.expr()), env) : limit(e, LimitPoint::pos_inf(), env);
  out.image_lo = out.increasing ? at_lo : at_hi;
  out.image_hi = out.increasing ? at_hi : at_lo;

  auto sol = solve(simplify(e), Expr::param(kY), lo, hi, env);
  if (sol) {
    Expr g = simplify(bind_exprs(*sol, {{kY, Expr::var()}}));
    bool ok = true;
    int checked = 0;
    for (std::size_t i = 1; i < xs.size() && ok; i += 3) {
      try {
        double y = eval_double(e, xs[i], np);
        if (!std::isfinite(y)) continue;
        double back = eval_double(e, eval_double(g, y, np), np);
        if (!std::isfinite(back)) continue;
        if (std::fabs(back - y) > 1e-9 * (1 + std::fabs(y))) ok = false;
        ++checked;
      } catch (const Error&) {
      }
    }
    ok = ok && checked >= 3;
    if (ok) {
      out.kind = InverseResult::Kind::Symbolic;
      out.g = g;
      return out;
    }
  }
  out.kind = InverseResult::Kind::Implicit;
  out.g = Expr::implicit(e, Expr::var(), lo.is_finite() ? std::optional<Expr>(lo.expr()) : std::nullopt,
                         hi.is_finite() ? std::optional<Expr>(hi.expr()) : std::nullopt);
  return out;
}

}  // namespace symop
