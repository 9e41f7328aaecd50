#pragma once

#include <set>
#include <span>
#include <vector>

#include "superortho/families.hpp"
#include "superortho/random.hpp"
#include "superortho/scalar.hpp"
#include "superortho/stepfn.hpp"

namespace testutil {

using namespace superortho;

inline Rational R(const char* text) { return parse_rational(text); }

inline Scalar random_value(Rng& rng, bool complex) {
  QSqrt2 re(rng.rational(), rng.coin() ? rng.rational() : Rational(0));
  if (!complex) return Scalar(re);
  return Scalar(re, QSqrt2(rng.rational(), rng.coin() ? rng.rational() : Rational(0)));
}

/// 1 to 4 pieces with breakpoints on the grid (1/8)Z in [-2, 2].
inline StepFunction random_step(Rng& rng, bool complex) {
  const int pieces = static_cast<int>(rng.uniform(1, 4));
  std::set<Rational> bp;
  while (static_cast<int>(bp.size()) < pieces + 1) bp.insert(ratio(rng.uniform(-16, 16), 8));
  std::vector<Scalar> vals;
  for (int i = 0; i < pieces; ++i) vals.push_back(random_value(rng, complex));
  return StepFunction(std::vector<Rational>(bp.begin(), bp.end()), vals);
}

/// Random values on the 2^depth cells of a dyadic root.
inline StepFunction random_dyadic_step(Rng& rng, const DyadicInterval& root, unsigned depth,
                                       bool complex) {
  const std::int64_t cells = std::int64_t{1} << depth;
  const Rational width = root.length() / cells;
  std::vector<Rational> bp;
  std::vector<Scalar> vals;
  for (std::int64_t c = 0; c <= cells; ++c) bp.push_back(root.left() + width * c);
  for (std::int64_t c = 0; c < cells; ++c) vals.push_back(rng.scalar(complex));
  return StepFunction(bp, vals);
}

/// Integral of f_{t_0}...f_{t_{r-1}} conj(f_{t_r}...f_{t_{2r-1}}) by sampling
/// every function at the midpoints of the union of breakpoints.
inline Scalar sampled_tuple_integral(const Family& fam, std::span<const std::size_t> tuple) {
  const std::size_t r = tuple.size() / 2;
  std::set<Rational> bp;
  for (std::size_t j : tuple) bp.insert(fam.fn(j).breakpoints().begin(), fam.fn(j).breakpoints().end());
  const std::vector<Rational> pts(bp.begin(), bp.end());
  Scalar total;
  for (std::size_t c = 0; c + 1 < pts.size(); ++c) {
    const Rational mid = (pts[c] + pts[c + 1]) / 2;
    Scalar v(1);
    for (std::size_t s = 0; s < tuple.size(); ++s) {
      const Scalar x = fam.fn(tuple[s])(mid);
      v *= s < r ? x : conj(x);
    }
    total += v * QSqrt2(Rational(pts[c + 1] - pts[c]));
  }
  return total;
}

}  // namespace testutil
