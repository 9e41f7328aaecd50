#include "superortho/random.hpp"

#include <limits>

namespace superortho {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

Rational Rng::rational() {
  const std::int64_t num = uniform(-9, 9);
  const std::int64_t den = uniform(1, 9);
  Rational q(static_cast<long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

Rational Rng::nonzero_rational() {
  Rational q;
  do {
    q = rational();
  } while (sgn(q) == 0);
  return q;
}

Scalar Rng::scalar(bool complex) {
  Rational re = rational();
  if (!complex) return Scalar(re);
  Rational im = rational();
  return Scalar(QSqrt2(re), QSqrt2(im));
}

Sequence Rng::sequence(std::size_t length, bool complex) {
  Sequence out;
  out.reserve(length);
  for (std::size_t j = 0; j < length; ++j) out.push_back(scalar(complex));
  return out;
}

}  // namespace superortho
