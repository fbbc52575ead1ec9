#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symop/num.hpp"

namespace symop {

using ExactParams = std::map<std::string, Rational>;
using NumericParams = std::map<std::string, double>;

// Immutable expression tree in one variable plus named parameters.
//
// Besides the closed-form grammar, two numeric node kinds exist:
//  - Implicit: the value t in (lo, hi) with fwd(t) = arg, fwd strictly monotone.
//  - Integral: the integral of integrand(t) dt from lower to arg.
// Inside fwd and integrand, Var denotes the bound variable t.
class Expr {
 public:
  enum class Kind { Number, Var, Param, Neg, Abs, Add, Sub, Mul, Div, Pow, Exp, Ln, Implicit, Integral };

  Expr();  // the exact constant 0

  static Expr number(const Num& v);
  static Expr integer(long v) { return number(Num(v)); }
  static Expr rational(const Rational& q) { return number(Num(q)); }
  static Expr var();
  static Expr param(const std::string& name);
  static Expr neg(const Expr& a);
  static Expr abs(const Expr& a);
  static Expr add(const Expr& a, const Expr& b);
  static Expr sub(const Expr& a, const Expr& b);
  static Expr mul(const Expr& a, const Expr& b);
  static Expr div(const Expr& a, const Expr& b);
  static Expr pow(const Expr& base, const Rational& exponent);
  static Expr exp(const Expr& a);
  static Expr ln(const Expr& a);
  static Expr implicit(const Expr& fwd, const Expr& arg, const std::optional<Expr>& lo,
                       const std::optional<Expr>& hi);
  static Expr integral(const Expr& integrand, const Expr& lower, const Expr& arg);

  Kind kind() const;
  const Num& value() const;            // Number
  const std::string& name() const;     // Param
  const Rational& exponent() const;    // Pow
  std::size_t arity() const;
  const Expr& arg(std::size_t i) const;
  // Implicit bracket ends; nullopt means infinite.
  std::optional<Expr> implicit_lo() const;
  std::optional<Expr> implicit_hi() const;

  bool is_number() const { return kind() == Kind::Number; }
  bool is_zero() const { return is_number() && value().is_zero(); }
  bool is_one() const { return is_number() && value().is_one(); }
  bool has_var() const;        // depends on the free variable
  bool has_numeric() const;    // contains Implicit or Integral nodes
  bool has_kind(Kind k) const;
  std::set<std::string> params() const;

  // Structural total order and equality.
  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

  std::string str(std::string_view var = "x") const;

  friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
  Expr operator-() const { return neg(*this); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Replaces the free variable by `value` (bound variables of Implicit and
// Integral bodies are untouched).
Expr substitute(const Expr& e, const Expr& value);
// Replaces every occurrence of the subtree `from` by `to`.
Expr replace(const Expr& e, const Expr& from, const Expr& to);
// Replaces parameters by constants.
Expr bind(const Expr& e, const ExactParams& params);
// Replaces parameters by expressions.
Expr bind_exprs(const Expr& e, const std::map<std::string, Expr>& values);

// Fast floating evaluation. Throws Domain / UnboundParameter.
double eval_double(const Expr& e, double x, const NumericParams& params = {});
// Exact where the operations are closed over the rationals, decimal
// otherwise. Infinite x is evaluated as a limit.
ExtReal eval(const Expr& e, const ExtReal& x, const ExactParams& params = {});

NumericParams to_numeric(const ExactParams& params);

// Composite Gauss-Legendre quadrature of integrand(t) over [a, b].
double integrate_numeric(const Expr& integrand, double a, double b, const NumericParams& params);

struct ParseOptions {
  std::string var = "x";
  // When set, identifiers outside this set are rejected (a multivariate
  // expression is a syntax error, not an implicit parameter).
  std::optional<std::set<std::string>> params;
};

// Grammar:
//   expr := term (("+"|"-") term)* ; term := factor (("*"|"/") factor)* ;
//   factor := base ("^" exponent)? ; base := number | var | ident | "(" expr ")"
//           | call | "-" factor ; call := ("abs"|"exp"|"ln"|"sqrt") "(" expr ")"
Expr parse_expr(std::string_view text, const ParseOptions& options = {});

// An Expr endpoint or an infinity (interval ends, set-valued bounds).
class ExtExpr {
 public:
  enum class Kind { Finite, PosInf, NegInf };
  ExtExpr() = default;
  ExtExpr(const Expr& e) : kind_(Kind::Finite), e_(e) {}
  static ExtExpr pos_inf() { return ExtExpr(Kind::PosInf); }
  static ExtExpr neg_inf() { return ExtExpr(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  const Expr& expr() const { return e_; }
  std::string str(std::string_view var = "x") const;
  double to_double(const NumericParams& params = {}) const;
  friend bool operator==(const ExtExpr& a, const ExtExpr& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.e_ == b.e_);
  }

 private:
  explicit ExtExpr(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Expr e_;
};

}  // namespace symop
