#pragma once

#include <gmpxx.h>

#include <string>

namespace symop {

using Rational = mpq_class;

// A finite scalar: an exact rational, or a binary64 decimal once an
// irrational operation (exp, ln, non-perfect roots) has been applied.
class Num {
 public:
  Num() : exact_(true), q_(0) {}
  Num(int v) : exact_(true), q_(v) {}
  Num(long v) : exact_(true), q_(v) {}
  Num(const Rational& q) : exact_(true), q_(q) { q_.canonicalize(); }
  static Num decimal(double d);

  bool is_exact() const { return exact_; }
  const Rational& rational() const { return q_; }
  double to_double() const { return exact_ ? q_.get_d() : d_; }

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_one() const { return exact_ && q_ == 1; }
  bool is_integer() const { return exact_ && q_.get_den() == 1; }

  Num operator-() const;
  friend Num operator+(const Num& a, const Num& b);
  friend Num operator-(const Num& a, const Num& b);
  friend Num operator*(const Num& a, const Num& b);
  // Throws Domain on division by zero.
  friend Num operator/(const Num& a, const Num& b);
  friend bool operator==(const Num& a, const Num& b);
  friend bool operator<(const Num& a, const Num& b);

  // Integer power, exact when the base is exact.
  Num pow_int(long n) const;

  // "p/q" (or "p") for exact values, else 17 significant digits.
  std::string numstr() const;
  // Shortest text that parses back to the same value.
  std::string str() const;

 private:
  bool exact_;
  Rational q_;
  double d_ = 0.0;
};

// Parses "3", "-2/5", "0.25", "1e-3" into an exact rational.
Rational parse_rational(const std::string& text);

// Extended real: finite Num or an infinity.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  ExtReal() = default;
  ExtReal(const Num& v) : kind_(Kind::Finite), v_(v) {}
  ExtReal(int v) : kind_(Kind::Finite), v_(v) {}
  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  const Num& value() const { return v_; }
  double to_double() const;
  std::string numstr() const;

 private:
  explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Num v_;
};

}  // namespace symop
