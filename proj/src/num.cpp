#include "symop/num.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "symop/error.hpp"

namespace symop {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::UnboundParameter: return "UnboundParameter";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NonElementary: return "NonElementary";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::UndecidableComparison: return "UndecidableComparison";
    case ErrorCode::InconsistentEnv: return "InconsistentEnv";
    case ErrorCode::OverlappingGuards: return "OverlappingGuards";
    case ErrorCode::GapInGuards: return "GapInGuards";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::DiscontinuousOnDomain: return "DiscontinuousOnDomain";
    case ErrorCode::NotLsc: return "NotLsc";
    case ErrorCode::NegativeScalar: return "NegativeScalar";
    case ErrorCode::EmptyOperator: return "EmptyOperator";
    case ErrorCode::GapInDomain: return "GapInDomain";
    case ErrorCode::ConstantPinFailure: return "ConstantPinFailure";
    case ErrorCode::NoFirstMoment: return "NoFirstMoment";
    case ErrorCode::UnsupportedTail: return "UnsupportedTail";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowOutsideDomain: return "WindowOutsideDomain";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::Internal: return "InternalInconsistency";
  }
  return "Error";
}

bool is_internal(ErrorCode code) {
  return code == ErrorCode::Internal || code == ErrorCode::ConstantPinFailure;
}

namespace {
std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}
}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& detail)
    : Error(ErrorCode::Syntax, detail + " at offset " + std::to_string(offset) +
                                   (expected.empty() ? "" : " (expected " + join(expected) + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

Num Num::decimal(double d) {
  Num n;
  n.exact_ = false;
  n.d_ = d;
  return n;
}

int Num::sign() const {
  if (exact_) return sgn(q_);
  return d_ > 0 ? 1 : (d_ < 0 ? -1 : 0);
}

Num Num::operator-() const {
  if (exact_) return Num(Rational(-q_));
  return decimal(-d_);
}

Num operator+(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return Num(Rational(a.q_ + b.q_));
  return Num::decimal(a.to_double() + b.to_double());
}

Num operator-(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return Num(Rational(a.q_ - b.q_));
  return Num::decimal(a.to_double() - b.to_double());
}

Num operator*(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return Num(Rational(a.q_ * b.q_));
  // 0 * anything stays an exact zero.
  if ((a.exact_ && a.q_ == 0) || (b.exact_ && b.q_ == 0)) return Num(0);
  return Num::decimal(a.to_double() * b.to_double());
}

Num operator/(const Num& a, const Num& b) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  if (a.exact_ && b.exact_) return Num(Rational(a.q_ / b.q_));
  return Num::decimal(a.to_double() / b.to_double());
}

bool operator==(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return a.q_ == b.q_;
  return a.to_double() == b.to_double();
}

bool operator<(const Num& a, const Num& b) {
  if (a.exact_ && b.exact_) return a.q_ < b.q_;
  return a.to_double() < b.to_double();
}

Num Num::pow_int(long n) const {
  if (n == 0) return Num(1);
  if (!exact_) return decimal(std::pow(d_, static_cast<double>(n)));
  if (n < 0) {
    if (q_ == 0) throw Error(ErrorCode::Domain, "zero to a negative power");
    return Num(1) / pow_int(-n);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(n));
  return Num(Rational(num, den));
}

std::string Num::numstr() const {
  if (exact_) return q_.get_str();
  if (std::isnan(d_)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d_);
  return buf;
}

std::string Num::str() const {
  if (exact_) return q_.get_str();
  if (std::isinf(d_)) return d_ > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d_);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

Rational parse_rational(const std::string& text) {
  std::string t = text;
  while (!t.empty() && t.front() == ' ') t.erase(t.begin());
  while (!t.empty() && t.back() == ' ') t.pop_back();
  if (t.empty()) throw Error(ErrorCode::Syntax, "empty number");
  bool neg = false;
  std::size_t i = 0;
  if (t[0] == '-' || t[0] == '+') {
    neg = t[0] == '-';
    i = 1;
  }
  std::string body = t.substr(i);
  Rational result;
  try {
    auto slash = body.find('/');
    if (slash != std::string::npos) {
      result = Rational(mpz_class(body.substr(0, slash), 10), mpz_class(body.substr(slash + 1), 10));
      if (result.get_den() == 0) throw Error(ErrorCode::Domain, "zero denominator");
      result.canonicalize();
    } else {
      long exp10 = 0;
      auto e = body.find_first_of("eE");
      std::string mant = body;
      if (e != std::string::npos) {
        exp10 = std::stol(body.substr(e + 1));
        mant = body.substr(0, e);
      }
      auto dot = mant.find('.');
      std::string digits = mant;
      if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
      }
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::Syntax, "malformed number '" + text + "'");
      mpz_class m(digits, 10);
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
      result = exp10 < 0 ? Rational(m, p) : Rational(m * p);
      result.canonicalize();
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::Syntax, "malformed number '" + text + "'");
  }
  return neg ? Rational(-result) : result;
}

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    default: return v_.to_double();
  }
}

std::string ExtReal::numstr() const {
  switch (kind_) {
    case Kind::PosInf: return "inf";
    case Kind::NegInf: return "-inf";
    default: return v_.numstr();
  }
}

}  // namespace symop
