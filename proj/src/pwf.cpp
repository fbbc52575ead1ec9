#include "symop/pwf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsl.hpp"
#include "symop/calculus.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

namespace symop {

const char* kind_name(Piece::Kind k) {
  switch (k) {
    case Piece::Kind::Affine: return "Affine";
    case Piece::Kind::StrictlyConvex: return "StrictlyConvex";
    case Piece::Kind::Infinite: return "Infinite";
  }
  return "?";
}

bool PiecewiseFunction::everywhere_infinite() const {
  for (const auto& p : pieces)
    if (!p.is_infinite()) return false;
  for (const auto& v : values)
    if (v.is_finite()) return false;
  return true;
}

ExtExpr PiecewiseFunction::piece_limit(std::size_t i, bool right_end) const {
  const Piece& p = pieces[i];
  if (p.is_infinite()) return ExtExpr::pos_inf();
  if (right_end) {
    if (i == breakpoints.size()) return limit(p.body, LimitPoint::pos_inf(), env);
    return limit(p.body, LimitPoint::left(breakpoints[i]), env);
  }
  if (i == 0) return limit(p.body, LimitPoint::neg_inf(), env);
  return limit(p.body, LimitPoint::right(breakpoints[i - 1]), env);
}

namespace {

using detail::compare_ext;

Ordering decided(const AssumptionEnv& env, const ExtExpr& a, const ExtExpr& b) {
  Ordering o = compare_ext(env, a, b);
  if (o == Ordering::Undecidable)
    throw Error(ErrorCode::UndecidableComparison, "cannot compare " + a.str() + " and " + b.str());
  return o;
}

std::set<std::string> all_params(const PiecewiseFunction& f) {
  std::set<std::string> out;
  for (const auto& b : f.breakpoints) out.merge(b.params());
  for (const auto& p : f.pieces)
    if (!p.is_infinite()) out.merge(p.body.params());
  for (const auto& v : f.values)
    if (v.is_finite()) out.merge(v.expr().params());
  return out;
}

ExtExpr cell_lo(const PiecewiseFunction& f, std::size_t i) {
  return i == 0 ? ExtExpr::neg_inf() : ExtExpr(f.breakpoints[i - 1]);
}
ExtExpr cell_hi(const PiecewiseFunction& f, std::size_t i) {
  return i == f.breakpoints.size() ? ExtExpr::pos_inf() : ExtExpr(f.breakpoints[i]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

[[noreturn]] void non_convex(const std::string& why, double a, double b, double c) {
  throw NonConvexError(why + "; witness (" + fmt(a) + ", " + fmt(b) + ", " + fmt(c) + ")", {a, b, c});
}

}  // namespace

ClassificationReport validate(PiecewiseFunction& f) {
  if (f.weakly_convex) {
    PiecewiseFunction g = add_expr(f, Expr::div(Expr::pow(Expr::var(), 2), Expr::integer(2)));
    g.weakly_convex = false;
    ClassificationReport rep = validate(g);
    for (std::size_t i = 0; i < f.pieces.size(); ++i)
      if (!f.pieces[i].is_infinite()) f.pieces[i].kind = g.pieces[i].kind;
    rep.checks.push_back(f.var + "^2/2 added before the convexity checks");
    return rep;
  }
  ClassificationReport rep;
  const AssumptionEnv& env = f.env;
  const std::size_t n = f.breakpoints.size();
  if (f.pieces.size() != n + 1 || f.values.size() != n)
    throw Error(ErrorCode::Internal, "piece/breakpoint count mismatch");
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (env.order(f.breakpoints[k], f.breakpoints[k + 1]) != Ordering::Less)
      throw Error(ErrorCode::Domain, "breakpoints must be strictly increasing");
  }
  rep.checks.push_back("breakpoints strictly increasing");
  NumericParams np = to_numeric(env.witness(all_params(f)));

  // pieces
  std::vector<std::optional<Expr>> slopes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    Piece& p = f.pieces[i];
    if (p.is_infinite()) {
      rep.kinds.push_back(Piece::Kind::Infinite);
      continue;
    }
    ExtExpr lo = cell_lo(f, i), hi = cell_hi(f, i);
    auto [a, b] = sample_window(lo, hi, np);
    std::vector<double> xs = chebyshev_points(a, b, 33);
    double c = eval_double(representative_point(lo, hi), 0, np);
    double h = std::min({1.0, c - a, b - c});
    Expr d1, d2;
    bool symbolic = true;
    try {
      d1 = differentiate(p.body);
      d2 = differentiate(d1);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unsupported) throw;
      symbolic = false;
    }
    if (symbolic) slopes[i] = d1;
    if (symbolic && !d1.has_var()) {
      p.kind = Piece::Kind::Affine;
    } else {
      double worst = 0, worst_x = c, biggest = 0;
      for (double x : xs) {
        double v;
        if (symbolic) {
          try {
            v = eval_double(d2, x, np);
          } catch (const Error&) {
            continue;
          }
        } else {
          double s = std::min({0.25, x - a, b - x});
          if (s <= 0) continue;
          v = (eval_double(p.body, x + s, np) - 2 * eval_double(p.body, x, np) + eval_double(p.body, x - s, np)) / (s * s);
        }
        if (!std::isfinite(v)) continue;
        biggest = std::max(biggest, std::fabs(v));
        if (v < worst) {
          worst = v;
          worst_x = x;
        }
      }
      if (worst < -1e-9 * (1 + biggest)) {
        double center = c;
        try {
          double vc = symbolic ? eval_double(d2, c, np) : worst;
          if (!(vc < 0)) center = worst_x;
        } catch (const Error&) {
          center = worst_x;
        }
        double hh = center == c ? h : std::min({1.0, center - a, b - center});
        non_convex("piece on " + lo.str() + " < x < " + hi.str() + " is not convex", center - hh, center, center + hh);
      }
      p.kind = biggest <= 1e-12 ? Piece::Kind::Affine : Piece::Kind::StrictlyConvex;
    }
    rep.kinds.push_back(p.kind);
    rep.checks.push_back("piece " + std::to_string(i) + ": " + kind_name(p.kind));
  }

  // domain must be an interval: finite entries contiguous in cell/point order
  std::vector<int> finite_at;  // 2i: cell i, 2k+1: breakpoint k
  for (std::size_t i = 0; i <= n; ++i) {
    if (!f.pieces[i].is_infinite()) finite_at.push_back(static_cast<int>(2 * i));
    if (i < n && f.values[i].is_finite()) finite_at.push_back(static_cast<int>(2 * i + 1));
  }
  for (std::size_t j = 1; j < finite_at.size(); ++j) {
    if (finite_at[j] != finite_at[j - 1] + 1) {
      auto point = [&](int slot) {
        if (slot % 2 == 1) return eval_double(f.breakpoints[static_cast<std::size_t>(slot / 2)], 0, np);
        std::size_t i = static_cast<std::size_t>(slot / 2);
        return eval_double(representative_point(cell_lo(f, i), cell_hi(f, i)), 0, np);
      };
      double x0 = point(finite_at[j - 1]), x2 = point(finite_at[j]);
      non_convex("domain is not an interval", x0, point(finite_at[j - 1] + 1), x2);
    }
  }
  rep.checks.push_back("domain is an interval");

  // breakpoints: lsc, continuity on the domain, slope monotonicity
  for (std::size_t k = 0; k < n; ++k) {
    const Expr& b = f.breakpoints[k];
    const ExtExpr& v = f.values[k];
    bool lf = !f.pieces[k].is_infinite(), rf = !f.pieces[k + 1].is_infinite();
    ExtExpr L = f.piece_limit(k, true), R = f.piece_limit(k + 1, false);
    if (L.is_neg_inf() || R.is_neg_inf())
      throw Error(ErrorCode::Domain, "function tends to -inf at x = " + b.str());
    std::string at = " at x = " + b.str();
    if (v.is_finite()) {
      if (lf && rf && L.is_finite() && R.is_finite()) {
        if (decided(env, L, v) != Ordering::Equal || decided(env, R, v) != Ordering::Equal)
          throw Error(ErrorCode::DiscontinuousOnDomain,
                      "value " + v.str() + at + " but one-sided limits are " + L.str() + " and " + R.str());
      }
      for (auto [fin, lim] : {std::pair{lf, L}, std::pair{rf, R}}) {
        if (!fin) continue;
        Ordering o = decided(env, v, lim);
        if (o == Ordering::Greater)
          throw Error(ErrorCode::NotLsc, "value " + v.str() + at + " exceeds the one-sided limit " + lim.str());
        if (o == Ordering::Less)
          throw Error(ErrorCode::DiscontinuousOnDomain,
                      "value " + v.str() + at + " differs from the one-sided limit " + lim.str());
      }
    } else {
      if ((lf && L.is_finite()) || (rf && R.is_finite()))
        throw Error(ErrorCode::NotLsc, "value +inf" + at + " but a one-sided limit is finite");
    }
    if (lf && rf && slopes[k] && slopes[k + 1]) {
      ExtExpr dl = limit(*slopes[k], LimitPoint::left(b), env);
      ExtExpr dr = limit(*slopes[k + 1], LimitPoint::right(b), env);
      if (decided(env, dl, dr) == Ordering::Greater) {
        double bx = eval_double(b, 0, np);
        double wl = k == 0 ? 1.0 : bx - eval_double(f.breakpoints[k - 1], 0, np);
        double wr = k + 1 == n ? 1.0 : eval_double(f.breakpoints[k + 1], 0, np) - bx;
        double h = std::min({1.0, wl, wr});
        non_convex("slope decreases across x = " + b.str() + " (" + dl.str() + " > " + dr.str() + ")", bx - h, bx, bx + h);
      }
    }
  }
  rep.checks.push_back("lsc and continuous on the domain");
  rep.checks.push_back("slopes nondecreasing across breakpoints");
  rep.everywhere_infinite = f.everywhere_infinite();
  if (rep.everywhere_infinite) rep.checks.push_back("everywhere +inf");
  return rep;
}

PiecewiseFunction add_expr(const PiecewiseFunction& f, const Expr& g) {
  PiecewiseFunction h = f;
  for (auto& p : h.pieces)
    if (!p.is_infinite()) p.body = simplify(p.body + g);
  for (std::size_t k = 0; k < h.values.size(); ++k)
    if (h.values[k].is_finite()) h.values[k] = simplify(h.values[k].expr() + substitute(g, h.breakpoints[k]));
  return h;
}

PiecewiseFunction make_pwf(std::vector<Expr> breakpoints, std::vector<Piece> pieces,
                           std::vector<std::optional<ExtExpr>> values, const AssumptionEnv& env) {
  PiecewiseFunction f;
  f.env = env;
  for (auto& b : breakpoints) b = simplify(b);
  for (auto& p : pieces) {
    if (!p.is_infinite()) {
      p.body = simplify(p.body);
      if (p.body.has_numeric()) f.numeric = true;
    }
  }
  f.breakpoints = std::move(breakpoints);
  f.pieces = std::move(pieces);
  if (f.pieces.size() != f.breakpoints.size() + 1 || values.size() != f.breakpoints.size())
    throw Error(ErrorCode::Internal, "piece/breakpoint count mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k]) {
      f.values.push_back(values[k]->is_finite() ? ExtExpr(simplify(values[k]->expr())) : *values[k]);
      continue;
    }
    ExtExpr L = f.piece_limit(k, true), R = f.piece_limit(k + 1, false);
    if (!L.is_finite()) {
      f.values.push_back(R);
    } else if (!R.is_finite()) {
      f.values.push_back(L);
    } else {
      // lower semicontinuous closure
      f.values.push_back(compare_ext(env, R, L) == Ordering::Less ? R : L);
    }
    if (f.values.back().is_neg_inf()) throw Error(ErrorCode::Domain, "function tends to -inf at x = " + f.breakpoints[k].str());
  }
  // merge adjacent identical pieces
  for (std::size_t k = 0; k < f.breakpoints.size();) {
    const Piece& a = f.pieces[k];
    const Piece& b = f.pieces[k + 1];
    bool same = false;
    if (a.is_infinite() && b.is_infinite()) {
      same = !f.values[k].is_finite();
    } else if (!a.is_infinite() && !b.is_infinite() && same_function(a.body, b.body) && f.values[k].is_finite()) {
      ExtExpr L = f.piece_limit(k, true);
      same = L.is_finite() && compare_ext(env, L, f.values[k]) == Ordering::Equal;
    }
    if (same) {
      f.breakpoints.erase(f.breakpoints.begin() + static_cast<long>(k));
      f.values.erase(f.values.begin() + static_cast<long>(k));
      f.pieces.erase(f.pieces.begin() + static_cast<long>(k) + 1);
    } else {
      ++k;
    }
  }
  validate(f);
  return f;
}

// ------------------------------------------------------------------ parsing

namespace {

void collect_abs(const Expr& e, std::vector<Expr>& out, bool inside) {
  if (e.kind() == Expr::Kind::Abs) {
    if (inside) throw Error(ErrorCode::Unsupported, "nested abs is not supported");
    out.push_back(e.arg(0));
    collect_abs(e.arg(0), out, true);
    return;
  }
  for (std::size_t i = 0; i < e.arity(); ++i) collect_abs(e.arg(i), out, inside);
}

Expr replace_abs(const Expr& e, const Expr& point, const AssumptionEnv& env) {
  using K = Expr::Kind;
  if (!e.has_kind(K::Abs)) return e;
  auto r = [&](std::size_t i) { return replace_abs(e.arg(i), point, env); };
  switch (e.kind()) {
    case K::Abs: {
      Expr u = e.arg(0);
      int s = env.sign(simplify(substitute(u, point)));
      return s < 0 ? Expr::neg(u) : u;
    }
    case K::Neg: return Expr::neg(r(0));
    case K::Add: return Expr::add(r(0), r(1));
    case K::Sub: return Expr::sub(r(0), r(1));
    case K::Mul: return Expr::mul(r(0), r(1));
    case K::Div: return Expr::div(r(0), r(1));
    case K::Pow: return Expr::pow(r(0), e.exponent());
    case K::Exp: return Expr::exp(r(0));
    case K::Ln: return Expr::ln(r(0));
    default: throw Error(ErrorCode::Unsupported, "abs inside a numeric node");
  }
}

struct Draft {
  std::vector<Expr> bps;
  std::vector<Piece> pieces;
  std::vector<std::optional<ExtExpr>> values;
};

// Splits every finite cell at the roots of its abs arguments.
Draft eliminate_abs(Draft d, const AssumptionEnv& env) {
  Draft out;
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    const Piece& p = d.pieces[i];
    ExtExpr lo = i == 0 ? ExtExpr::neg_inf() : ExtExpr(d.bps[i - 1]);
    ExtExpr hi = i == d.bps.size() ? ExtExpr::pos_inf() : ExtExpr(d.bps[i]);
    std::vector<Expr> roots;
    if (!p.is_infinite() && p.body.has_kind(Expr::Kind::Abs)) {
      std::vector<Expr> args;
      collect_abs(p.body, args, false);
      for (const auto& u : args) {
        auto lin = as_linear(simplify(u));
        if (!lin) throw Error(ErrorCode::Unsupported, "abs argument must be affine in x: " + u.str());
        if (lin->first.is_zero()) continue;
        Expr root = simplify(Expr::div(Expr::neg(lin->second), lin->first));
        if (compare_ext(env, lo, root) == Ordering::Less && compare_ext(env, root, hi) == Ordering::Less)
          roots.push_back(root);
      }
      roots = detail::sort_unique(roots, env);
    }
    std::vector<ExtExpr> ends{lo};
    for (const auto& r : roots) ends.push_back(r);
    ends.push_back(hi);
    for (std::size_t j = 0; j + 1 < ends.size(); ++j) {
      if (j > 0) {
        out.bps.push_back(ends[j].expr());
        out.values.push_back(std::nullopt);
      }
      if (p.is_infinite() || !p.body.has_kind(Expr::Kind::Abs))
        out.pieces.push_back(p);
      else
        out.pieces.push_back(Piece::finite(replace_abs(p.body, representative_point(ends[j], ends[j + 1]), env)));
    }
    if (i < d.bps.size()) {
      out.bps.push_back(d.bps[i]);
      out.values.push_back(d.values[i]);
    }
  }
  return out;
}

std::optional<ExtExpr> point_value(const Expr& body, const Expr& at) {
  Expr v = simplify(substitute(body, at));
  return ExtExpr(v);
}

}  // namespace

static PiecewiseFunction parse_pwf_body(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  detail::Parser p(text, options);
  Draft d;
  if (p.at_ident("pw") && p.peek(1).kind == detail::Tok::Sym && p.peek(1).text == "{") {
    p.next();
    p.next();
    std::vector<detail::Guard> guards;
    std::vector<Piece> bodies;
    for (;;) {
      guards.push_back(detail::parse_guard(p, env));
      p.expect_sym("->");
      if (p.at_ident("inf")) {
        p.next();
        bodies.push_back(Piece::infinite());
      } else {
        bodies.push_back(Piece::finite(p.expr()));
      }
      if (p.at_sym(";")) {
        p.next();
        if (p.at_sym("}")) break;
        continue;
      }
      break;
    }
    p.expect_sym("}");
    p.expect_end();
    detail::Cover c = detail::cover(guards, env);
    d.bps = c.breakpoints;
    for (int owner : c.cell) d.pieces.push_back(bodies[static_cast<std::size_t>(owner)]);
    for (std::size_t k = 0; k < c.point.size(); ++k) {
      int owner = c.point[k];
      if (owner < 0) {
        d.values.push_back(std::nullopt);
        continue;
      }
      const Piece& body = bodies[static_cast<std::size_t>(owner)];
      if (body.is_infinite()) {
        d.values.push_back(ExtExpr::pos_inf());
        continue;
      }
      const Expr& b = d.bps[k];
      ExtExpr v;
      if (c.cell[k] == owner)
        v = limit(body.body, LimitPoint::left(b), env);
      else if (c.cell[k + 1] == owner)
        v = limit(body.body, LimitPoint::right(b), env);
      else
        v = *point_value(body.body, b);
      d.values.push_back(v);
    }
  } else {
    Expr e = p.expr();
    p.expect_end();
    d.pieces.push_back(Piece::finite(e));
  }
  d = eliminate_abs(std::move(d), env);
  return make_pwf(d.bps, d.pieces, d.values, env);
}

// --------------------------------------------------------------- evaluation

Location locate(const std::vector<Expr>& breakpoints, const Expr& x, const AssumptionEnv& env) {
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    Ordering o = env.order(x, breakpoints[k]);
    if (o == Ordering::Less) return {false, k};
    if (o == Ordering::Equal) return {true, k};
  }
  return {false, breakpoints.size()};
}

ExtReal eval_pwf(const PiecewiseFunction& f, const ExtReal& x, const ExactParams& params) {
  auto finish = [&](const ExtExpr& v) -> ExtReal {
    if (v.is_pos_inf()) return ExtReal::pos_inf();
    if (v.is_neg_inf()) return ExtReal::neg_inf();
    return eval(v.expr(), ExtReal(Num(0)), params);
  };
  if (!x.is_finite()) {
    std::size_t i = x.kind() == ExtReal::Kind::PosInf ? f.pieces.size() - 1 : 0;
    if (f.pieces[i].is_infinite()) return ExtReal::pos_inf();
    return eval(f.pieces[i].body, x, params);
  }
  std::vector<Expr> bps;
  for (const auto& b : f.breakpoints) bps.push_back(simplify(bind(b, params)));
  Location loc = locate(bps, Expr::number(x.value()), f.env);
  if (loc.at_breakpoint) {
    const ExtExpr& v = f.values[loc.index];
    return v.is_finite() ? finish(ExtExpr(bind(v.expr(), params))) : finish(v);
  }
  const Piece& p = f.pieces[loc.index];
  if (p.is_infinite()) return ExtReal::pos_inf();
  return eval(p.body, x, params);
}

double eval_pwf_double(const PiecewiseFunction& f, double x, const NumericParams& params) {
  std::size_t i = 0;
  for (; i < f.breakpoints.size(); ++i) {
    double b = eval_double(f.breakpoints[i], 0, params);
    if (x == b) {
      const ExtExpr& v = f.values[i];
      return v.is_finite() ? eval_double(v.expr(), 0, params) : INFINITY;
    }
    if (x < b) break;
  }
  const Piece& p = f.pieces[i];
  if (p.is_infinite()) return INFINITY;
  return eval_double(p.body, x, params);
}

Interval domain(const PiecewiseFunction& f) {
  Interval dom;
  const std::size_t n = f.breakpoints.size();
  int first = -1, last = -1;
  for (std::size_t i = 0; i <= n; ++i) {
    int cell = static_cast<int>(2 * i);
    if (!f.pieces[i].is_infinite()) {
      if (first < 0) first = cell;
      last = cell;
    }
    if (i < n && f.values[i].is_finite()) {
      if (first < 0) first = cell + 1;
      last = cell + 1;
    }
  }
  if (first < 0) {
    dom.empty = true;
    return dom;
  }
  if (first % 2 == 1) {
    dom.lo = f.breakpoints[static_cast<std::size_t>(first / 2)];
    dom.lo_closed = true;
  } else {
    dom.lo = cell_lo(f, static_cast<std::size_t>(first / 2));
  }
  if (last % 2 == 1) {
    dom.hi = f.breakpoints[static_cast<std::size_t>(last / 2)];
    dom.hi_closed = true;
  } else {
    dom.hi = cell_hi(f, static_cast<std::size_t>(last / 2));
  }
  return dom;
}

std::string Interval::str(std::string_view var) const {
  if (empty) return "empty";
  if (lo_closed && hi_closed && lo == hi) return "{" + lo.str(var) + "}";
  return std::string(lo_closed ? "[" : "(") + lo.str(var) + ", " + hi.str(var) + (hi_closed ? "]" : ")");
}

std::string to_string(const PiecewiseFunction& f) {
  const std::string& x = f.var;
  auto body = [&](const Piece& p) { return p.is_infinite() ? std::string("inf") : p.body.str(x); };
  if (f.breakpoints.empty()) return body(f.pieces[0]);
  const std::size_t n = f.breakpoints.size();
  auto matches = [&](std::size_t k, const Piece& p) {
    if (p.is_infinite()) return !f.values[k].is_finite();
    if (!f.values[k].is_finite() || p.body.has_numeric()) return false;
    try {
      return simplify(substitute(p.body, f.breakpoints[k])) == f.values[k].expr();
    } catch (const Error&) {
      return false;
    }
  };
  std::vector<std::string> cells, points;
  std::vector<int> attach;
  for (const auto& p : f.pieces) cells.push_back(body(p));
  for (std::size_t k = 0; k < n; ++k) {
    points.push_back(f.values[k].is_finite() ? f.values[k].expr().str(x) : std::string("inf"));
    attach.push_back(matches(k, f.pieces[k]) ? -1 : matches(k, f.pieces[k + 1]) ? 1 : 0);
  }
  return detail::render_branches("pw", x, f.breakpoints, cells, points, attach);
}

PiecewiseFunction parse_pwf(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  PiecewiseFunction out = parse_pwf_body(text, env, options);
  out.var = options.var;
  return out;
}

}  // namespace symop
