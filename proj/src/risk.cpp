#include "symop/risk.hpp"

#include "symop/conv.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

namespace symop {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidDistribution, why); }

bool equal(const AssumptionEnv& env, const ExtExpr& a, const Expr& b) {
  return a.is_finite() && env.compare(a.expr(), b) == Ordering::Equal;
}

bool guessed(const Expr& e) { return e.has_numeric() || (e.is_number() && !e.value().is_exact()); }

// Constant c with lim (body + c) = target at the given end, or the matching
// error when the tail cannot be pinned.
Expr tail_constant(const Expr& body, const LimitPoint& at, const AssumptionEnv& env) {
  ExtExpr l;
  try {
    l = limit(body, at, env);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Unsupported || e.code() == ErrorCode::UndecidableComparison)
      throw Error(ErrorCode::UnsupportedTail, std::string("tail limit not computable: ") + e.message());
    throw;
  }
  if (!l.is_finite()) throw Error(ErrorCode::NoFirstMoment, "the first moment diverges");
  if (guessed(l.expr())) throw Error(ErrorCode::UnsupportedTail, "tail limit only known numerically");
  return simplify(-l.expr());
}

ExtExpr value_at(const PiecewiseFunction& f, const Expr& x) {
  Location loc = locate(f.breakpoints, x, f.env);
  if (loc.at_breakpoint) return f.values[loc.index];
  const Piece& p = f.pieces[loc.index];
  if (p.is_infinite()) return ExtExpr::pos_inf();
  return simplify(substitute(p.body, x));
}

SetValue set_at(const MonotoneOperator& t, const Expr& x) {
  Location loc = locate(t.breakpoints, x, t.env);
  if (loc.at_breakpoint) return t.values[loc.index];
  const OpPiece& p = t.pieces[loc.index];
  if (p.is_empty()) return SetValue::empty();
  return SetValue::point(simplify(substitute(p.body, x)));
}

void check_level(const DistributionSpec& d, const Expr& p) {
  const AssumptionEnv& env = d.env;
  if (env.compare(Expr(), p) != Ordering::Less || env.compare(p, Expr::integer(1)) != Ordering::Less)
    throw Error(ErrorCode::POutOfRange, "level " + p.str() + " is not decidably inside (0, 1)");
}

}  // namespace

DistributionSpec cdf_distribution(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  std::string src(text);
  auto start = src.find_first_not_of(" \t\n");
  if (start != std::string::npos && src.compare(start, 2, "pw") == 0) src.replace(start, 2, "sd");
  DistributionSpec d;
  d.kind = DistributionSpec::Kind::Cdf;
  d.env = env;
  try {
    d.cdf = parse_operator(src, env, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotMonotone) invalid(std::string("distribution function decreases: ") + e.message());
    throw;
  }
  const MonotoneOperator& t = d.cdf;
  for (const auto& p : t.pieces)
    if (p.is_empty()) invalid("distribution function must be defined everywhere");
  if (!equal(env, t.piece_limit(0, false), Expr()))
    invalid("distribution function must tend to 0 at -inf");
  if (!equal(env, t.piece_limit(t.pieces.size() - 1, true), Expr::integer(1)))
    invalid("distribution function must tend to 1 at +inf");
  for (std::size_t k = 0; k < t.breakpoints.size(); ++k) {
    const SetValue& v = t.values[k];
    if (v.is_point() && !equal(env, t.piece_limit(k + 1, false), v.lo().expr()))
      invalid("distribution function is not right-continuous at " + t.breakpoints[k].str());
  }
  return d;
}

DistributionSpec quantile_distribution(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  Expr q = parse_expr(text, options);
  DistributionSpec d;
  d.kind = DistributionSpec::Kind::Quantile;
  d.env = env;
  try {
    d.cdf = make_operator({Expr(), Expr::integer(1)}, {OpPiece::empty(), OpPiece::value(q), OpPiece::empty()},
                          {std::nullopt, std::nullopt}, env);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotMonotone) invalid(std::string("quantile function decreases: ") + e.message());
    throw;
  }
  d.cdf.var = options.var;
  return d;
}

PiecewiseFunction superexpectation(const DistributionSpec& d) {
  if (d.kind == DistributionSpec::Kind::Quantile) {
    PiecewiseFunction e = conjugate(superexpectation_conjugate(d));
    e.var = "x";
    return e;
  }
  PiecewiseFunction e = integ(d.cdf);
  const Piece& last = e.pieces.back();
  Expr c = tail_constant(simplify(last.body - Expr::var()), LimitPoint::pos_inf(), d.env);
  if (!c.is_zero()) e = add_expr(e, c);
  tail_constant(e.pieces.front().body, LimitPoint::neg_inf(), d.env);
  e.var = d.cdf.var;
  return e;
}

PiecewiseFunction superexpectation_conjugate(const DistributionSpec& d) {
  if (d.kind == DistributionSpec::Kind::Cdf) {
    PiecewiseFunction s = conjugate(superexpectation(d));
    s.var = "p";
    return s;
  }
  PiecewiseFunction s = integ(d.cdf);
  // s lives on [0, 1]; the middle piece carries the integral of Q.
  Expr c = tail_constant(s.pieces[1].body, LimitPoint::left(Expr::integer(1)), d.env);
  tail_constant(s.pieces[1].body, LimitPoint::right(Expr()), d.env);
  if (!c.is_zero()) s = add_expr(s, c);
  s.var = d.cdf.var;
  return s;
}

MonotoneOperator superdistribution(const DistributionSpec& d) {
  MonotoneOperator t = subdifferential(superexpectation(d));
  t.var = "x";
  return t;
}

ExtExpr superquantile(const DistributionSpec& d, const Expr& p) {
  check_level(d, p);
  PiecewiseFunction s = superexpectation_conjugate(d);
  ExtExpr one = value_at(s, Expr::integer(1)), at = value_at(s, p);
  if (!one.is_finite() || !at.is_finite()) throw Error(ErrorCode::Internal, "conjugate is infinite inside [0, 1]");
  return simplify((one.expr() - at.expr()) / (Expr::integer(1) - p));
}

ExtExpr quantile(const DistributionSpec& d, const Expr& p) {
  check_level(d, p);
  if (d.kind == DistributionSpec::Kind::Quantile) {
    SetValue v = set_at(maximal_extension(d.cdf), p);
    if (v.is_empty()) throw Error(ErrorCode::Internal, "quantile undefined inside (0, 1)");
    return v.lo();
  }
  SetValue v = set_at(subdifferential(superexpectation_conjugate(d)), p);
  if (v.is_empty()) throw Error(ErrorCode::Internal, "quantile undefined inside (0, 1)");
  return v.lo();
}

ExtExpr cvar(const DistributionSpec& d, const Expr& p) { return superquantile(d, p); }

}  // namespace symop
