#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symop/expr.hpp"

namespace symop {

// Canonical sum-of-products form: a sum of coefficient * product of atoms
// raised to rational powers. Atoms are the variable, parameters, exp/ln/abs
// calls, numeric nodes, and unexpanded sums (as denominators or under
// fractional powers). Products of sums are expanded; exp factors merge.
class Poly {
 public:
  struct Factor {
    Expr base;
    Rational exp;
  };
  using Monomial = std::vector<Factor>;
  struct Term {
    Monomial mono;
    Num coef;
  };

  Poly() = default;
  static Poly constant(const Num& c);
  static Poly atom(const Expr& base, const Rational& exp = 1);
  static Poly from(const Expr& e);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Num> as_constant() const;
  bool has_var() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Num& c) const;
  Poly pow(const Rational& r) const;
  Poly inverse() const;
  // Terms sharing a sum s in the denominator are added up and s divided out
  // when it divides their numerator exactly.
  Poly cancelled() const;
  // Lowers powers of each implicit atom I (and calls such as exp(I)) with
  // the relation fwd(I) = arg.
  Poly implicit_reduced() const;

  Expr to_expr() const;

 private:
  void add_term(Monomial m, const Num& c);
  std::vector<Term> terms_;
};

// Canonical simplification; equal expressions (as functions) built from the
// same atoms map to structurally equal results.
Expr simplify(const Expr& e);
// True when simplify(a - b) is identically zero.
bool same_function(const Expr& a, const Expr& b);

// a0 + sum_i c_i * p_i with rational coefficients over parameters.
struct ParamAffine {
  Rational constant;
  std::map<std::string, Rational> coef;
  bool is_constant() const { return coef.empty(); }
  Expr to_expr() const;
};
std::optional<ParamAffine> as_param_affine(const Expr& e);

// e = slope * x + intercept with x-free slope and intercept.
std::optional<std::pair<Expr, Expr>> as_linear(const Expr& e);

// Coefficients (ascending degree) when e is a polynomial in x with x-free
// coefficients.
std::optional<std::vector<Expr>> as_polynomial(const Expr& e);

}  // namespace symop
