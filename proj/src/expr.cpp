#include "symop/expr.hpp"

#include <cmath>
#include <limits>

#include "symop/error.hpp"
#include "symop/limit.hpp"

namespace symop {

struct Expr::Node {
  Kind kind = Kind::Number;
  Num value;
  Rational exponent;
  std::string name;
  std::vector<Expr> args;
  bool lo_inf = false;
  bool hi_inf = false;
  bool has_var = false;
  bool has_numeric = false;
};

namespace {

std::shared_ptr<Expr::Node> make(Expr::Kind k, std::vector<Expr> args = {}) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  for (const auto& a : n->args) {
    n->has_var = n->has_var || a.has_var();
    n->has_numeric = n->has_numeric || a.has_numeric();
  }
  return n;
}

}  // namespace

Expr::Expr() : node_(make(Kind::Number)) {}

Expr Expr::number(const Num& v) {
  auto n = make(Kind::Number);
  n->value = v;
  return Expr(n);
}

Expr Expr::var() {
  auto n = make(Kind::Var);
  n->has_var = true;
  return Expr(n);
}

Expr Expr::param(const std::string& name) {
  auto n = make(Kind::Param);
  n->name = name;
  return Expr(n);
}

Expr Expr::neg(const Expr& a) {
  if (a.is_number()) return number(-a.value());
  return Expr(make(Kind::Neg, {a}));
}
Expr Expr::abs(const Expr& a) { return Expr(make(Kind::Abs, {a})); }
Expr Expr::add(const Expr& a, const Expr& b) { return Expr(make(Kind::Add, {a, b})); }
Expr Expr::sub(const Expr& a, const Expr& b) { return Expr(make(Kind::Sub, {a, b})); }
Expr Expr::mul(const Expr& a, const Expr& b) { return Expr(make(Kind::Mul, {a, b})); }
Expr Expr::div(const Expr& a, const Expr& b) { return Expr(make(Kind::Div, {a, b})); }
Expr Expr::exp(const Expr& a) { return Expr(make(Kind::Exp, {a})); }
Expr Expr::ln(const Expr& a) { return Expr(make(Kind::Ln, {a})); }

Expr Expr::pow(const Expr& base, const Rational& exponent) {
  auto n = make(Kind::Pow, {base});
  n->exponent = exponent;
  n->exponent.canonicalize();
  return Expr(n);
}

Expr Expr::implicit(const Expr& fwd, const Expr& arg, const std::optional<Expr>& lo,
                    const std::optional<Expr>& hi) {
  auto n = make(Kind::Implicit, {fwd, arg, lo.value_or(Expr()), hi.value_or(Expr())});
  n->lo_inf = !lo.has_value();
  n->hi_inf = !hi.has_value();
  n->has_var = arg.has_var();
  n->has_numeric = true;
  return Expr(n);
}

Expr Expr::integral(const Expr& integrand, const Expr& lower, const Expr& arg) {
  auto n = make(Kind::Integral, {integrand, lower, arg});
  n->has_var = arg.has_var() || lower.has_var();
  n->has_numeric = true;
  return Expr(n);
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Num& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Rational& Expr::exponent() const { return node_->exponent; }
std::size_t Expr::arity() const { return node_->args.size(); }
const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }
bool Expr::has_var() const { return node_->has_var; }
bool Expr::has_numeric() const { return node_->has_numeric; }

std::optional<Expr> Expr::implicit_lo() const {
  if (node_->lo_inf) return std::nullopt;
  return node_->args.at(2);
}
std::optional<Expr> Expr::implicit_hi() const {
  if (node_->hi_inf) return std::nullopt;
  return node_->args.at(3);
}

bool Expr::has_kind(Kind k) const {
  if (kind() == k) return true;
  for (const auto& a : node_->args)
    if (a.has_kind(k)) return true;
  return false;
}

std::set<std::string> Expr::params() const {
  std::set<std::string> out;
  if (kind() == Kind::Param) out.insert(name());
  for (const auto& a : node_->args) {
    auto sub = a.params();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Expr::Kind::Number: {
      const Num& x = a.value();
      const Num& y = b.value();
      if (x.is_exact() != y.is_exact()) return x.is_exact() ? -1 : 1;
      if (x == y) return 0;
      return x < y ? -1 : 1;
    }
    case Expr::Kind::Param:
      return a.name() == b.name() ? 0 : (a.name() < b.name() ? -1 : 1);
    case Expr::Kind::Pow:
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      break;
    case Expr::Kind::Implicit:
      if (a.node_->lo_inf != b.node_->lo_inf) return a.node_->lo_inf ? -1 : 1;
      if (a.node_->hi_inf != b.node_->hi_inf) return a.node_->hi_inf ? -1 : 1;
      break;
    default:
      break;
  }
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    int c = compare(a.arg(i), b.arg(i));
    if (c != 0) return c;
  }
  return 0;
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    case Expr::Kind::Number:
      if (e.value().sign() < 0) return 3;
      if (e.value().is_exact() && !e.value().is_integer()) return 2;
      return 5;
    default: return 5;
  }
}

std::string print(const Expr& e, int ctx, std::string_view var);

std::string wrap(const Expr& e, int ctx, std::string_view var) {
  std::string s = print(e, 0, var);
  if (precedence(e) < ctx) return "(" + s + ")";
  return s;
}

std::string print(const Expr& e, int ctx, std::string_view var) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return e.value().str();
    case K::Var: return std::string(var);
    case K::Param: return e.name();
    case K::Neg: return "-" + wrap(e.arg(0), 3, var);
    case K::Abs: return "abs(" + print(e.arg(0), 0, var) + ")";
    case K::Exp: return "exp(" + print(e.arg(0), 0, var) + ")";
    case K::Ln: return "ln(" + print(e.arg(0), 0, var) + ")";
    case K::Add: return wrap(e.arg(0), 1, var) + " + " + wrap(e.arg(1), 2, var);
    case K::Sub: return wrap(e.arg(0), 1, var) + " - " + wrap(e.arg(1), 2, var);
    case K::Mul: return wrap(e.arg(0), 2, var) + "*" + wrap(e.arg(1), 3, var);
    case K::Div: {
      std::string l = wrap(e.arg(0), 2, var);
      std::string r = wrap(e.arg(1), 3, var);
      // A leading "2/3" reads back as one rational literal.
      const Expr& a = e.arg(0);
      if (a.is_number() && a.value().is_exact() && a.value().is_integer() && !r.empty() &&
          std::isdigit(static_cast<unsigned char>(r.front())))
        l = "(" + l + ")";
      return l + "/" + r;
    }
    case K::Pow: {
      const Rational& r = e.exponent();
      std::string ex = (r.get_den() == 1 && sgn(r) >= 0) ? r.get_str() : "(" + r.get_str() + ")";
      return wrap(e.arg(0), 5, var) + "^" + ex;
    }
    case K::Implicit: {
      std::string s = "inverse[t -> " + print(e.arg(0), 0, "t");
      auto lo = e.implicit_lo();
      auto hi = e.implicit_hi();
      s += " on (" + (lo ? print(*lo, 0, var) : std::string("-inf")) + ", " +
           (hi ? print(*hi, 0, var) : std::string("inf")) + ")]";
      return s + "(" + print(e.arg(1), 0, var) + ")";
    }
    case K::Integral:
      return "integral[t -> " + print(e.arg(0), 0, "t") + " from " + print(e.arg(1), 0, var) +
             "](" + print(e.arg(2), 0, var) + ")";
  }
  (void)ctx;
  return "?";
}

}  // namespace

std::string Expr::str(std::string_view var) const { return print(*this, 0, var); }

std::string ExtExpr::str(std::string_view var) const {
  switch (kind_) {
    case Kind::PosInf: return "inf";
    case Kind::NegInf: return "-inf";
    default: return e_.str(var);
  }
}

double ExtExpr::to_double(const NumericParams& params) const {
  switch (kind_) {
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    default: return eval_double(e_, 0.0, params);
  }
}

// ------------------------------------------------------------ substitution

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Neg: return Expr::neg(args[0]);
    case K::Abs: return Expr::abs(args[0]);
    case K::Exp: return Expr::exp(args[0]);
    case K::Ln: return Expr::ln(args[0]);
    case K::Add: return Expr::add(args[0], args[1]);
    case K::Sub: return Expr::sub(args[0], args[1]);
    case K::Mul: return Expr::mul(args[0], args[1]);
    case K::Div: return Expr::div(args[0], args[1]);
    case K::Pow: return Expr::pow(args[0], e.exponent());
    case K::Implicit:
      return Expr::implicit(args[0], args[1],
                            e.implicit_lo() ? std::optional<Expr>(args[2]) : std::nullopt,
                            e.implicit_hi() ? std::optional<Expr>(args[3]) : std::nullopt);
    case K::Integral: return Expr::integral(args[0], args[1], args[2]);
    default: return e;
  }
}

}  // namespace

Expr substitute(const Expr& e, const Expr& value) {
  using K = Expr::Kind;
  if (e.kind() == K::Var) return value;
  if (!e.has_var()) return e;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    bool bound_body = (e.kind() == K::Implicit || e.kind() == K::Integral) && i == 0;
    args.push_back(bound_body ? e.arg(i) : substitute(e.arg(i), value));
  }
  return rebuild(e, std::move(args));
}

Expr replace(const Expr& e, const Expr& from, const Expr& to) {
  if (e == from) return to;
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(replace(e.arg(i), from, to));
  return rebuild(e, std::move(args));
}

Expr bind(const Expr& e, const ExactParams& params) {
  if (e.kind() == Expr::Kind::Param) {
    auto it = params.find(e.name());
    return it == params.end() ? e : Expr::rational(it->second);
  }
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(bind(e.arg(i), params));
  return rebuild(e, std::move(args));
}

Expr bind_exprs(const Expr& e, const std::map<std::string, Expr>& values) {
  if (e.kind() == Expr::Kind::Param) {
    auto it = values.find(e.name());
    return it == values.end() ? e : it->second;
  }
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(bind_exprs(e.arg(i), values));
  return rebuild(e, std::move(args));
}

NumericParams to_numeric(const ExactParams& params) {
  NumericParams out;
  for (const auto& [k, v] : params) out[k] = v.get_d();
  return out;
}

// -------------------------------------------------------------- evaluation

namespace {

double real_pow(double b, const Rational& r) {
  double rd = r.get_d();
  if (r.get_den() == 1) {
    if (b == 0.0 && sgn(r) < 0) throw Error(ErrorCode::Domain, "zero to a negative power");
    return std::pow(b, rd);
  }
  if (b < 0) {
    if (mpz_even_p(r.get_den_mpz_t()))
      throw Error(ErrorCode::Domain, "even root of a negative number");
    double mag = std::pow(-b, rd);
    return mpz_odd_p(r.get_num_mpz_t()) ? -mag : mag;
  }
  if (b == 0.0 && sgn(r) < 0) throw Error(ErrorCode::Domain, "zero to a negative power");
  return std::pow(b, rd);
}

double solve_implicit(const Expr& fwd, double target, double lo, double hi,
                      const NumericParams& params) {
  auto g = [&](double t) { return eval_double(fwd, t, params); };
  // Orientation from two interior probes.
  double p1, p2;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    p1 = lo + (hi - lo) / 3;
    p2 = lo + 2 * (hi - lo) / 3;
  } else if (std::isfinite(lo)) {
    p1 = lo + 1;
    p2 = lo + 2;
  } else if (std::isfinite(hi)) {
    p1 = hi - 2;
    p2 = hi - 1;
  } else {
    p1 = -1;
    p2 = 1;
  }
  double dir = g(p2) >= g(p1) ? 1.0 : -1.0;
  auto h = [&](double t) { return dir * (g(t) - target); };

  double a = lo, b = hi;
  if (!std::isfinite(a)) {
    double s = std::isfinite(b) ? b - 1 : 0.0;
    double step = 1;
    int guard = 0;
    while (h(s) > 0) {
      s -= step;
      step *= 2;
      if (++guard > 1100) throw Error(ErrorCode::MaxIterations, "implicit bracket (left)");
    }
    a = s;
  }
  if (!std::isfinite(b)) {
    double s = std::isfinite(a) ? std::max(a + 1, 0.0 + a) : 0.0;
    if (std::isfinite(lo) && s <= lo) s = lo + 1;
    double step = 1;
    int guard = 0;
    while (h(s) < 0) {
      s += step;
      step *= 2;
      if (++guard > 1100) throw Error(ErrorCode::MaxIterations, "implicit bracket (right)");
    }
    b = s;
  }
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (b - a <= 1e-14 * std::max(1.0, std::abs(m))) break;
    if (h(m) < 0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

// 8-point Gauss-Legendre on [-1,1].
constexpr double kGLNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double kGLWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(F& f, double a, double b) {
  double c = 0.5 * (a + b), r = 0.5 * (b - a), s = 0;
  for (int i = 0; i < 8; ++i) s += kGLWeights[i] * f(c + r * kGLNodes[i]);
  return s * r;
}

template <class F>
double adaptive(F& f, double a, double b, double whole, int depth) {
  double m = 0.5 * (a + b);
  double left = gauss8(f, a, m), right = gauss8(f, m, b);
  if (depth <= 0 || std::abs(left + right - whole) <= 1e-10 * (1 + std::abs(left + right)))
    return left + right;
  return adaptive(f, a, m, left, depth - 1) + adaptive(f, m, b, right, depth - 1);
}

}  // namespace

double integrate_numeric(const Expr& integrand, double a, double b, const NumericParams& params) {
  if (a == b) return 0;
  auto f = [&](double t) { return eval_double(integrand, t, params); };
  // 8 panels x 8 nodes, then adaptive refinement per panel.
  double total = 0;
  const int panels = 8;
  for (int i = 0; i < panels; ++i) {
    double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
    total += adaptive(f, lo, hi, gauss8(f, lo, hi), 12);
  }
  return total;
}

double eval_double(const Expr& e, double x, const NumericParams& params) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return e.value().to_double();
    case K::Var: return x;
    case K::Param: {
      auto it = params.find(e.name());
      if (it == params.end()) throw Error(ErrorCode::UnboundParameter, "parameter '" + e.name() + "'");
      return it->second;
    }
    case K::Neg: return -eval_double(e.arg(0), x, params);
    case K::Abs: return std::abs(eval_double(e.arg(0), x, params));
    case K::Add: return eval_double(e.arg(0), x, params) + eval_double(e.arg(1), x, params);
    case K::Sub: return eval_double(e.arg(0), x, params) - eval_double(e.arg(1), x, params);
    case K::Mul: {
      double a = eval_double(e.arg(0), x, params);
      if (a == 0.0) {
        double b = eval_double(e.arg(1), x, params);
        return std::isfinite(b) ? 0.0 : a * b;
      }
      return a * eval_double(e.arg(1), x, params);
    }
    case K::Div: {
      double d = eval_double(e.arg(1), x, params);
      if (d == 0.0) throw Error(ErrorCode::Domain, "division by zero");
      return eval_double(e.arg(0), x, params) / d;
    }
    case K::Pow: return real_pow(eval_double(e.arg(0), x, params), e.exponent());
    case K::Exp: return std::exp(eval_double(e.arg(0), x, params));
    case K::Ln: {
      double a = eval_double(e.arg(0), x, params);
      if (!(a > 0)) throw Error(ErrorCode::Domain, "log of nonpositive value");
      return std::log(a);
    }
    case K::Implicit: {
      double target = eval_double(e.arg(1), x, params);
      auto lo = e.implicit_lo();
      auto hi = e.implicit_hi();
      double l = lo ? eval_double(*lo, 0, params) : -std::numeric_limits<double>::infinity();
      double h = hi ? eval_double(*hi, 0, params) : std::numeric_limits<double>::infinity();
      return solve_implicit(e.arg(0), target, l, h, params);
    }
    case K::Integral: {
      double lower = eval_double(e.arg(1), x, params);
      double upper = eval_double(e.arg(2), x, params);
      return integrate_numeric(e.arg(0), lower, upper, params);
    }
  }
  return 0;
}

namespace {

// Exact q-th root of a nonnegative rational, if it is a perfect power.
std::optional<Rational> exact_root(const Rational& v, unsigned long q) {
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), v.get_num_mpz_t(), q) == 0) return std::nullopt;
  if (mpz_root(rd.get_mpz_t(), v.get_den_mpz_t(), q) == 0) return std::nullopt;
  return Rational(rn, rd);
}

Num exact_pow(const Num& b, const Rational& r) {
  if (r.get_den() == 1) return b.pow_int(r.get_num().get_si());
  if (!b.is_exact()) return Num::decimal(real_pow(b.to_double(), r));
  if (b.sign() < 0 && mpz_even_p(r.get_den_mpz_t()))
    throw Error(ErrorCode::Domain, "even root of a negative number");
  if (b.is_zero() && sgn(r) < 0) throw Error(ErrorCode::Domain, "zero to a negative power");
  Rational mag = abs(b.rational());
  if (r.get_den().fits_ulong_p()) {
    if (auto root = exact_root(mag, r.get_den().get_ui())) {
      Num m = Num(*root).pow_int(r.get_num().get_si());
      bool neg = b.sign() < 0 && mpz_odd_p(r.get_num_mpz_t());
      return neg ? -m : m;
    }
  }
  return Num::decimal(real_pow(b.to_double(), r));
}

Num eval_exact(const Expr& e, const Num& x, const ExactParams& params) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return e.value();
    case K::Var: return x;
    case K::Param: {
      auto it = params.find(e.name());
      if (it == params.end()) throw Error(ErrorCode::UnboundParameter, "parameter '" + e.name() + "'");
      return Num(it->second);
    }
    case K::Neg: return -eval_exact(e.arg(0), x, params);
    case K::Abs: {
      Num v = eval_exact(e.arg(0), x, params);
      return v.sign() < 0 ? -v : v;
    }
    case K::Add: return eval_exact(e.arg(0), x, params) + eval_exact(e.arg(1), x, params);
    case K::Sub: return eval_exact(e.arg(0), x, params) - eval_exact(e.arg(1), x, params);
    case K::Mul: return eval_exact(e.arg(0), x, params) * eval_exact(e.arg(1), x, params);
    case K::Div: return eval_exact(e.arg(0), x, params) / eval_exact(e.arg(1), x, params);
    case K::Pow: return exact_pow(eval_exact(e.arg(0), x, params), e.exponent());
    case K::Exp: {
      Num a = eval_exact(e.arg(0), x, params);
      if (a.is_zero() && a.is_exact()) return Num(1);
      return Num::decimal(std::exp(a.to_double()));
    }
    case K::Ln: {
      Num a = eval_exact(e.arg(0), x, params);
      if (a.sign() <= 0) throw Error(ErrorCode::Domain, "log of nonpositive value");
      if (a.is_one()) return Num(0);
      return Num::decimal(std::log(a.to_double()));
    }
    default:
      return Num::decimal(eval_double(e, x.to_double(), to_numeric(params)));
  }
}

}  // namespace

ExtReal eval(const Expr& e, const ExtReal& x, const ExactParams& params) {
  if (!x.is_finite()) {
    Expr bound = bind(e, params);
    AssumptionEnv env;
    ExtExpr lim = limit(bound, x.kind() == ExtReal::Kind::PosInf ? LimitPoint::pos_inf()
                                                                  : LimitPoint::neg_inf(),
                        env);
    if (lim.is_pos_inf()) return ExtReal::pos_inf();
    if (lim.is_neg_inf()) return ExtReal::neg_inf();
    return ExtReal(eval_exact(lim.expr(), Num(0), params));
  }
  return ExtReal(eval_exact(e, x.value(), params));
}

}  // namespace symop
