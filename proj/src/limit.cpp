#include "symop/limit.hpp"

#include <cmath>
#include <map>

#include "symop/error.hpp"
#include "symop/simplify.hpp"

namespace symop {

namespace {

// value ~ coef * t^A * ln(1/t)^L * exp(sum_m growth[m] * t^-m)   as t -> 0+
struct Asym {
  bool zero = false;
  Expr coef;
  Rational A = 0;
  Rational L = 0;
  std::map<Rational, Expr> growth;
};

[[noreturn]] void unsupported(const std::string& what) { throw Error(ErrorCode::Unsupported, "limit: " + what); }

void clean(std::map<Rational, Expr>& g) {
  for (auto it = g.begin(); it != g.end();) {
    it->second = simplify(it->second);
    if (it->second.is_zero())
      it = g.erase(it);
    else
      ++it;
  }
}

class Engine {
 public:
  explicit Engine(const AssumptionEnv& env) : env_(env) {}

  Asym of_expr(const Expr& e) {
    if (++depth_ > 200) unsupported("expression too deep");
    Asym r = of_poly(Poly::from(e));
    --depth_;
    return r;
  }

  ExtExpr limit_of(const Asym& a) {
    if (a.zero) return Expr();
    if (!a.growth.empty()) {
      const Expr& top = a.growth.rbegin()->second;
      if (env_.sign(top) < 0) return Expr();
      return env_.sign(a.coef) > 0 ? ExtExpr::pos_inf() : ExtExpr::neg_inf();
    }
    int dir = 0;
    if (a.A > 0) return Expr();
    if (a.A < 0) dir = 1;
    else if (a.L < 0) return Expr();
    else if (a.L > 0) dir = 1;
    if (dir == 0) return simplify(a.coef);
    return env_.sign(a.coef) > 0 ? ExtExpr::pos_inf() : ExtExpr::neg_inf();
  }

 private:
  static Asym constant(const Expr& c) {
    Asym a;
    a.coef = c;
    return a;
  }

  Asym mul(const Asym& x, const Asym& y) {
    if (x.zero || y.zero) {
      Asym z;
      z.zero = true;
      return z;
    }
    Asym r;
    r.coef = simplify(Expr::mul(x.coef, y.coef));
    r.A = x.A + y.A;
    r.L = x.L + y.L;
    r.growth = x.growth;
    for (const auto& [m, e] : y.growth) r.growth[m] = r.growth.count(m) ? Expr::add(r.growth[m], e) : e;
    clean(r.growth);
    return r;
  }

  Asym pow(const Asym& x, const Rational& p) {
    if (x.zero) {
      if (sgn(p) <= 0) throw Error(ErrorCode::Domain, "limit: zero to a nonpositive power");
      return x;
    }
    Asym r;
    if (p.get_den() != 1 && mpz_even_p(p.get_den_mpz_t()) && env_.sign(x.coef) < 0)
      throw Error(ErrorCode::Domain, "limit: even root of a negative quantity");
    r.coef = simplify(Expr::pow(x.coef, p));
    r.A = x.A * p;
    r.L = x.L * p;
    for (const auto& [m, e] : x.growth) r.growth[m] = Expr::mul(Expr::rational(p), e);
    clean(r.growth);
    return r;
  }

  // >0 when x dominates y, <0 when y dominates, 0 for the same class.
  int dominance(const Asym& x, const Asym& y) {
    std::map<Rational, std::pair<Expr, Expr>> g;
    for (const auto& [m, e] : x.growth) g[m].first = e;
    for (const auto& [m, e] : y.growth) g[m].second = e;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
      int s = env_.sign(Expr::sub(it->second.first, it->second.second));
      if (s != 0) return s;
    }
    if (x.A != y.A) return x.A < y.A ? 1 : -1;
    if (x.L != y.L) return x.L > y.L ? 1 : -1;
    return 0;
  }

  struct Split {
    Rational a = 0;       // power of t
    Poly coef;            // t-free part
    Poly::Monomial rest;  // t-dependent atoms
  };

  static Split split(const Poly::Term& t) {
    Split s;
    s.coef = Poly::constant(t.coef);
    for (const auto& f : t.mono) {
      if (f.base.kind() == Expr::Kind::Var)
        s.a += f.exp;
      else if (!f.base.has_var())
        s.coef = s.coef * Poly::atom(f.base, f.exp);
      else
        s.rest.push_back(f);
    }
    return s;
  }

  Asym of_poly(const Poly& p) {
    if (p.is_zero()) {
      Asym z;
      z.zero = true;
      return z;
    }
    // Group by t-dependent atoms; each group's coefficient is a generalized
    // polynomial in t whose lowest nonvanishing power leads.
    struct Group {
      Poly::Monomial rest;
      std::map<Rational, Poly> tpoly;
    };
    std::map<Expr, Group> groups;
    for (const auto& term : p.terms()) {
      Split s = split(term);
      Poly key_poly;
      for (const auto& f : s.rest) key_poly = key_poly.is_zero() ? Poly::atom(f.base, f.exp) : key_poly * Poly::atom(f.base, f.exp);
      Expr key = s.rest.empty() ? Expr::integer(1) : key_poly.to_expr();
      Group& g = groups[key];
      g.rest = s.rest;
      g.tpoly[s.a] = g.tpoly[s.a] + s.coef;
    }
    std::vector<Asym> classes;
    for (auto& [key, g] : groups) {
      Asym lead;
      bool found = false;
      for (const auto& [a, c] : g.tpoly) {
        if (c.is_zero()) continue;
        lead = constant(c.to_expr());
        lead.A = a;
        found = true;
        break;
      }
      if (!found) continue;
      for (const auto& f : g.rest) lead = mul(lead, pow(of_atom(f.base), f.exp));
      if (lead.zero) continue;
      bool merged = false;
      for (auto& c : classes) {
        if (dominance(c, lead) == 0) {
          c.coef = simplify(Expr::add(c.coef, lead.coef));
          merged = true;
          break;
        }
      }
      if (!merged) classes.push_back(lead);
    }
    const Asym* best = nullptr;
    for (const auto& c : classes) {
      if (c.coef.is_zero()) continue;
      if (!best || dominance(c, *best) > 0) best = &c;
    }
    for (const auto& c : classes) {
      if (!c.coef.is_zero()) continue;
      if (!best || dominance(c, *best) >= 0) unsupported("leading terms cancel");
    }
    if (!best) {
      Asym z;
      z.zero = true;
      return z;
    }
    return *best;
  }

  Expr finite_value(const Asym& a) {
    ExtExpr v = limit_of(a);
    if (!v.is_finite()) unsupported("argument diverges");
    return v.expr();
  }

  // u = sum growth[m] t^-m + logk * ln(1/t) + c + o(1)
  struct Decomp {
    std::map<Rational, Expr> growth;
    Rational logk = 0;
    Expr c;
  };

  Decomp decompose(const Expr& u) {
    Decomp d;
    Poly p = Poly::from(u);
    for (const auto& term : p.terms()) {
      Split s = split(term);
      Expr coef = s.coef.to_expr();
      if (s.rest.empty()) {
        if (s.a < 0)
          d.growth[-s.a] = d.growth.count(-s.a) ? Expr::add(d.growth[-s.a], coef) : coef;
        else if (s.a == 0)
          d.c = Expr::add(d.c, coef);
        continue;
      }
      if (s.a == 0 && s.rest.size() == 1 && s.rest[0].exp == 1 && s.rest[0].base.kind() == Expr::Kind::Ln) {
        Asym w = of_expr(s.rest[0].base.arg(0));
        if (w.zero) throw Error(ErrorCode::Domain, "limit: log of zero");
        if (w.L != 0) unsupported("iterated logarithm");
        for (const auto& [m, e] : w.growth) {
          Expr add = Expr::mul(coef, e);
          d.growth[m] = d.growth.count(m) ? Expr::add(d.growth[m], add) : add;
        }
        if (w.A != 0) {
          auto k = s.coef.as_constant();
          if (!k || !k->is_exact()) unsupported("symbolic power of the limit variable");
          d.logk += -w.A * k->rational();
        }
        if (env_.sign(w.coef) <= 0) throw Error(ErrorCode::Domain, "limit: log of a nonpositive quantity");
        d.c = Expr::add(d.c, Expr::mul(coef, Expr::ln(w.coef)));
        continue;
      }
      Asym a = constant(coef);
      a.A = s.a;
      for (const auto& f : s.rest) a = mul(a, pow(of_atom(f.base), f.exp));
      d.c = Expr::add(d.c, finite_value(a));
    }
    clean(d.growth);
    d.c = simplify(d.c);
    return d;
  }

  Asym of_atom(const Expr& base) {
    using K = Expr::Kind;
    switch (base.kind()) {
      case K::Var: {
        Asym a = constant(Expr::integer(1));
        a.A = 1;
        return a;
      }
      case K::Exp: {
        Decomp d = decompose(base.arg(0));
        Asym a = constant(simplify(Expr::exp(d.c)));
        a.A = -d.logk;
        a.growth = d.growth;
        return a;
      }
      case K::Ln: {
        Asym w = of_expr(base.arg(0));
        if (w.zero) throw Error(ErrorCode::Domain, "limit: log of zero");
        if (!w.growth.empty()) {
          auto top = *w.growth.rbegin();
          Asym a = constant(top.second);
          a.A = -top.first;
          return a;
        }
        if (w.A != 0) {
          Asym a = constant(Expr::rational(-w.A));
          a.L = 1;
          return a;
        }
        if (w.L != 0) unsupported("iterated logarithm");
        if (env_.sign(w.coef) <= 0) throw Error(ErrorCode::Domain, "limit: log of a nonpositive quantity");
        Expr c = simplify(w.coef);
        if (simplify(Expr::sub(c, Expr::integer(1))).is_zero()) {
          // ln(u) ~ u - 1 as u -> 1
          return of_expr(Expr::sub(base.arg(0), Expr::integer(1)));
        }
        return constant(simplify(Expr::ln(c)));
      }
      case K::Abs: {
        Asym w = of_expr(base.arg(0));
        if (w.zero) return w;
        if (env_.sign(w.coef) < 0) w.coef = simplify(Expr::neg(w.coef));
        return w;
      }
      case K::Implicit: {
        ExtExpr v = limit_of(of_expr(base.arg(1)));
        if (v.is_finite()) return constant(Expr::implicit(base.arg(0), v.expr(), base.implicit_lo(), base.implicit_hi()));
        // The inverse tends to the bracket end whose image end is v.
        auto lo = base.implicit_lo();
        auto hi = base.implicit_hi();
        ExtExpr at_lo = lo ? limit(base.arg(0), LimitPoint::right(*lo), env_) : limit(base.arg(0), LimitPoint::neg_inf(), env_);
        ExtExpr at_hi = hi ? limit(base.arg(0), LimitPoint::left(*hi), env_) : limit(base.arg(0), LimitPoint::pos_inf(), env_);
        std::optional<Expr> end;
        bool upper = at_hi == v;
        if (upper)
          end = hi;
        else if (at_lo == v)
          end = lo;
        else
          unsupported("implicit argument leaves the image");
        if (end && !simplify(*end).is_zero()) return constant(*end);
        // fwd ~ c s^A near the end, with s -> 0+ the distance to it (or 1/|t|
        // when it is infinite); invert the leading term.
        const Expr s = Expr::var();
        Expr at = end ? (upper ? Expr::sub(*end, s) : Expr::add(*end, s))
                      : Expr::div(Expr::integer(upper ? 1 : -1), s);
        Asym f = of_expr(substitute(base.arg(0), at));
        if (f.zero || !f.growth.empty() || f.L != 0 || f.A == 0) unsupported("implicit inverse at its bracket end");
        Expr d = Expr::pow(Expr::div(base.arg(1), f.coef), end ? 1 / f.A : -1 / f.A);
        return of_expr(upper == !end ? d : Expr::neg(d));
      }
      case K::Integral: {
        Expr v = finite_value(of_expr(base.arg(2)));
        return constant(Expr::integral(base.arg(0), base.arg(1), v));
      }
      default: return of_expr(base);
    }
  }

  const AssumptionEnv& env_;
  int depth_ = 0;
};

// Sequence test at t = 10^-k: converging differences give a value, steadily
// growing ones an infinity.
ExtExpr numeric_limit(const Expr& f, bool at_infinity) {
  const std::vector<double> ts = at_infinity ? std::vector<double>{1e-3, 1e-6, 1e-9, 1e-12}
                                             : std::vector<double>{1e-3, 1e-5, 1e-7, 1e-9};
  std::vector<double> v;
  for (double t : ts) {
    double y;
    try {
      y = eval_double(f, t);
    } catch (const Error&) {
      unsupported("numeric evaluation failed near the limit point");
    }
    if (std::isnan(y)) unsupported("numeric evaluation failed near the limit point");
    if (std::isinf(y)) return y > 0 ? ExtExpr::pos_inf() : ExtExpr::neg_inf();
    v.push_back(y);
  }
  double d1 = v[1] - v[0], d2 = v[2] - v[1], d3 = v[3] - v[2];
  if (std::fabs(d3) <= 1e-6 * (1 + std::fabs(v[3]))) return Expr::number(Num::decimal(v[3]));
  bool same = (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
  if (same && std::fabs(d3) >= 0.5 * std::fabs(d2)) return d3 > 0 ? ExtExpr::pos_inf() : ExtExpr::neg_inf();
  unsupported("no limit detected numerically");
}

}  // namespace

ExtExpr limit(const Expr& e, const LimitPoint& p, const AssumptionEnv& env) {
  if (!e.has_var()) return simplify(e);
  if (p.kind == LimitPoint::Kind::Right || p.kind == LimitPoint::Kind::Left) {
    // Elementary functions are continuous wherever they are defined.
    try {
      Expr direct = simplify(substitute(e, p.at));
      NumericParams np = to_numeric(env.witness(direct.params()));
      if (std::isfinite(eval_double(direct, 0, np))) return direct;
    } catch (const Error&) {
    }
  }
  Expr t = Expr::var();
  Expr x;
  switch (p.kind) {
    case LimitPoint::Kind::PosInf: x = Expr::div(Expr::integer(1), t); break;
    case LimitPoint::Kind::NegInf: x = Expr::div(Expr::integer(-1), t); break;
    case LimitPoint::Kind::Right: x = Expr::add(p.at, t); break;
    case LimitPoint::Kind::Left: x = Expr::sub(p.at, t); break;
  }
  Expr f = substitute(e, x);
  try {
    Engine eng(env);
    return eng.limit_of(eng.of_expr(f));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::Unsupported && err.code() != ErrorCode::Domain) throw;
    if (!f.params().empty()) throw;
    return numeric_limit(f, p.kind == LimitPoint::Kind::PosInf || p.kind == LimitPoint::Kind::NegInf);
  }
}

}  // namespace symop
