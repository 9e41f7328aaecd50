#include "superortho/scalar.hpp"

#include <cctype>
#include <cmath>

#include "superortho/error.hpp"

namespace superortho {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' ||
      den.front() == '+') {
    throw ParseError("invalid rational literal '" + std::string(text) + "'");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(parse_integer(num), d);
  q.canonicalize();
  return q;
}

Rational ratio(long num, long den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

int QSqrt2::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: the term with the larger square dominates.
  const Rational a2 = a_ * a_;
  const Rational b2 = 2 * b_ * b_;
  return a2 > b2 ? sa : sb;
}

QSqrt2 QSqrt2::inverse() const {
  const Rational n = norm();
  if (sgn(n) == 0) throw PreconditionError("inverse of zero in Q(sqrt 2)");
  return QSqrt2(Rational(a_ / n), Rational(-b_ / n));
}

double QSqrt2::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(2.0); }

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  // (a + b r)(c + d r) = (ac + 2bd) + (ad + bc) r,  r = sqrt 2
  Rational a = a_ * o.a_ + 2 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QSqrt2& QSqrt2::operator*=(const Rational& q) {
  a_ *= q;
  b_ *= q;
  return *this;
}

int compare(const QSqrt2& x, const QSqrt2& y) { return (x - y).sign(); }

QSqrt2 pow(const QSqrt2& base, unsigned exponent) {
  QSqrt2 result(1);
  QSqrt2 b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (im_.is_zero() && o.im_.is_zero()) {
    re_ *= o.re_;
    return *this;
  }
  QSqrt2 re = re_ * o.re_ - im_ * o.im_;
  QSqrt2 im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Scalar& Scalar::operator*=(const QSqrt2& q) {
  re_ *= q;
  im_ *= q;
  return *this;
}

Scalar pow(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

std::string to_string(const QSqrt2& x) {
  if (x.is_rational()) return to_string(x.rational_part());
  const Rational& b = x.sqrt2_part();
  const std::string tail = to_string(Rational(abs(b))) + "*sqrt2";
  if (sgn(x.rational_part()) == 0) return (sgn(b) < 0 ? "-" : "") + tail;
  return to_string(x.rational_part()) + (sgn(b) < 0 ? " - " : " + ") + tail;
}

std::string to_string(const Scalar& z) {
  if (z.is_real()) return to_string(z.real());
  return "(" + to_string(z.real()) + ") + i(" + to_string(z.imag()) + ")";
}

}  // namespace superortho
