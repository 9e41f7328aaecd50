#pragma once

// Seeded generators for randomized campaigns. The engine is std::mt19937_64
// (fully specified by the C++ standard), and integer ranges are drawn by
// rejection sampling on its raw 64-bit output, so a seed reproduces the same
// stream on every conforming implementation.

#include <cstdint>
#include <random>

#include "superortho/qk.hpp"
#include "superortho/scalar.hpp"

namespace superortho {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return uniform(0, 1) == 1; }

  /// Numerator uniform in [-9, 9], denominator uniform in [1, 9].
  Rational rational();
  /// Like rational() but never zero.
  Rational nonzero_rational();
  /// Rational real part, and a rational imaginary part when `complex`.
  Scalar scalar(bool complex);
  Sequence sequence(std::size_t length, bool complex);

 private:
  std::mt19937_64 engine_;
};

}  // namespace superortho
