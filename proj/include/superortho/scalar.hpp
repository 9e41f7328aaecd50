#pragma once

// Exact value domain: rationals, the quadratic field Q(sqrt 2), and complex
// numbers with real and imaginary parts in Q(sqrt 2).

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace superortho {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Renders as "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q" and "-p/q" with decimal integers. Throws ParseError on
/// anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

Rational pow(const Rational& base, unsigned exponent);

/// num/den in lowest terms. Plain mpq_class(num, den) does not reduce.
Rational ratio(long num, long den);

/// The real number a + b*sqrt(2) with a, b rational.
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(const Rational& rational_part, const Rational& sqrt2_part = 0)
      : a_(rational_part), b_(sqrt2_part) {}
  QSqrt2(long value) : a_(value), b_(0) {}
  QSqrt2(int value) : a_(value), b_(0) {}

  static QSqrt2 sqrt2() { return QSqrt2(0, 1); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  /// Exact sign in {-1, 0, +1}.
  int sign() const;

  /// Field norm a^2 - 2 b^2; zero only for the zero element.
  Rational norm() const { return a_ * a_ - 2 * b_ * b_; }
  /// Galois conjugate a - b*sqrt(2).
  QSqrt2 galois_conjugate() const { return QSqrt2(a_, -b_); }
  QSqrt2 inverse() const;

  double to_double() const;

  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator*=(const Rational& q);

  friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
  friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
  friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
  friend QSqrt2 operator*(QSqrt2 x, const Rational& q) { return x *= q; }
  friend QSqrt2 operator*(const Rational& q, QSqrt2 x) { return x *= q; }
  friend QSqrt2 operator/(const QSqrt2& x, const QSqrt2& y) { return x * y.inverse(); }
  QSqrt2 operator-() const { return QSqrt2(-a_, -b_); }

  friend bool operator==(const QSqrt2& x, const QSqrt2& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

/// Three-way exact comparison: sign(x - y).
int compare(const QSqrt2& x, const QSqrt2& y);
inline bool operator<(const QSqrt2& x, const QSqrt2& y) { return compare(x, y) < 0; }
inline bool operator<=(const QSqrt2& x, const QSqrt2& y) { return compare(x, y) <= 0; }
inline const QSqrt2& max(const QSqrt2& x, const QSqrt2& y) { return compare(x, y) >= 0 ? x : y; }

QSqrt2 pow(const QSqrt2& base, unsigned exponent);

/// Complex number re + i*im with components in Q(sqrt 2).
class Scalar {
 public:
  Scalar() = default;
  Scalar(const QSqrt2& re, const QSqrt2& im = QSqrt2()) : re_(re), im_(im) {}
  Scalar(const Rational& re) : re_(re) {}
  Scalar(long value) : re_(value) {}
  Scalar(int value) : re_(value) {}

  static Scalar i() { return Scalar(QSqrt2(), QSqrt2(1)); }

  const QSqrt2& real() const { return re_; }
  const QSqrt2& imag() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// re^2 + im^2, a nonnegative element of Q(sqrt 2).
  QSqrt2 modulus_squared() const { return re_ * re_ + im_ * im_; }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const QSqrt2& q);

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator*(Scalar x, const QSqrt2& q) { return x *= q; }
  friend Scalar operator*(const QSqrt2& q, Scalar x) { return x *= q; }
  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }

 private:
  QSqrt2 re_;
  QSqrt2 im_;
};

Scalar pow(const Scalar& base, unsigned exponent);
inline Scalar conj(const Scalar& z) { return z.conj(); }
inline QSqrt2 modulus_squared(const Scalar& z) { return z.modulus_squared(); }

std::string to_string(const QSqrt2& x);
std::string to_string(const Scalar& z);

}  // namespace superortho
