#include <cmath>

#include "doctest.h"
#include "superortho/error.hpp"
#include "superortho/random.hpp"
#include "superortho/scalar.hpp"

using namespace superortho;

namespace {

QSqrt2 q(const char* a, const char* b = "0") { return QSqrt2(parse_rational(a), parse_rational(b)); }

QSqrt2 random_qsqrt2(Rng& rng) { return QSqrt2(rng.rational(), rng.rational()); }

Scalar random_scalar(Rng& rng) { return Scalar(random_qsqrt2(rng), random_qsqrt2(rng)); }

}  // namespace

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("+4/2") == 2);
  CHECK(to_string(parse_rational("10/4")) == "5/2");
  CHECK(to_string(parse_rational("-8/4")) == "-2");
}

TEST_CASE("parse_rational rejects junk") {
  for (const char* bad : {"", "1/0", "1/-2", "a", "1.5", "1/", "/2", "1 /2", "--1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), ParseError);
  }
}

TEST_CASE("field arithmetic examples") {
  CHECK(q("1", "1") * q("1", "-1") == QSqrt2(-1));
  CHECK(conj(Scalar(1)) == Scalar(1));
  CHECK(q("0", "1/2") * q("0", "1/2") == QSqrt2(Rational(1, 2)));
  CHECK(modulus_squared(Scalar(1) + Scalar::i()) == QSqrt2(2));
  CHECK(pow(Scalar(QSqrt2::sqrt2()), 4) == Scalar(4));
  CHECK(modulus_squared(Scalar(q("0", "1/2"), q("0", "1/2"))) == QSqrt2(1));
  CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
  CHECK(pow(Scalar(2), 0) == Scalar(1));
}

TEST_CASE("sign examples") {
  CHECK(q("3", "-2").sign() == 1);
  CHECK(QSqrt2().sign() == 0);
  CHECK(q("1", "-1").sign() == -1);
  CHECK(q("-3", "2").sign() == -1);
  CHECK(q("-1", "1").sign() == 1);
  CHECK(q("0", "-1/3").sign() == -1);
  CHECK(q("-5").sign() == -1);
}

TEST_CASE("inverse and division") {
  const QSqrt2 x = q("3", "-2");
  CHECK(x * x.inverse() == QSqrt2(1));
  CHECK(q("1") / q("0", "1") == q("0", "1/2"));
  CHECK_THROWS_AS(QSqrt2().inverse(), PreconditionError);
}

TEST_CASE("comparison and max") {
  CHECK(q("1", "1") < q("3"));
  CHECK_FALSE(q("3") < q("1", "1"));
  CHECK(max(q("7/5"), q("0", "1")) == q("0", "1"));
  CHECK(compare(q("2"), q("0", "1") * q("0", "1")) == 0);
}

TEST_CASE("sign agrees with floating point away from zero") {
  Rng rng(11);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const QSqrt2 x = random_qsqrt2(rng);
    const double d = x.to_double();
    if (std::fabs(d) <= 1e-6) continue;
    ++checked;
    CHECK(x.sign() == (d > 0 ? 1 : -1));
  }
  CHECK(checked > 900);
}

TEST_CASE("near-cancelling signs are exact") {
  // 99/70 and 577/408 are convergents of sqrt 2 on either side.
  CHECK(q("99/70", "-1").sign() == 1);
  CHECK(q("577/408", "-1").sign() == 1);
  CHECK(q("140/99", "-1").sign() == -1);
  CHECK(q("-665857/470832", "1").sign() == -1);
}

TEST_CASE("squares are nonnegative and zero only at zero") {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    const QSqrt2 x = random_qsqrt2(rng);
    CHECK((x * x).sign() >= 0);
    CHECK((x.sign() == 0) == (sgn(x.rational_part()) == 0 && sgn(x.sqrt2_part()) == 0));
    CHECK((x.norm() == 0) == x.is_zero());
  }
}

TEST_CASE("ring laws on random triples") {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(conj(a * b) == conj(a) * conj(b));
    CHECK(modulus_squared(a * b) == modulus_squared(a) * modulus_squared(b));
    CHECK(a - a == Scalar());
  }
}

TEST_CASE("string forms") {
  CHECK(to_string(q("1/2", "-3")) == "1/2 - 3*sqrt2");
  CHECK(to_string(QSqrt2()) == "0");
}
