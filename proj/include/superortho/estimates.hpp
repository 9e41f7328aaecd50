#pragma once

// Exact checks of L^{2r} square function estimates for finite families.
// Every comparison is made between 2r-th powers of norms, which stay inside
// Q(sqrt 2); only the reported ratio uses floating point.

#include <string_view>
#include <vector>

#include "superortho/families.hpp"
#include "superortho/stepfn.hpp"

namespace superortho {

enum class BoundMethod { Paper, Optimized, User };

std::string_view name(BoundMethod m);
BoundMethod parse_bound_method(std::string_view text);

/// Certified upper bound for C_r^{2r}.
struct ConstantBound {
  unsigned r = 1;
  Rational c_pow_2r = 1;
  BoundMethod method = BoundMethod::Paper;
};

/// Paper: 1 for r = 1, 2^r ((2r)! - 1)^r for r >= 2.
/// Optimized (r >= 2): 2((2r)! - 1)(1 + E/r) with
/// E = (2(r-1)((2r)! - 1)/r)^{r-1}, the largest admissible eps^{-r} when
/// eps^{r/(r-1)} (r-1)/r ((2r)! - 1) <= 1/2.
ConstantBound constant_bound(unsigned r, BoundMethod method);
/// Caller-supplied C^{2r}; must be >= 1.
ConstantBound user_bound(unsigned r, const Rational& c_pow_2r);

struct SquareEstimateReport {
  unsigned r = 1;
  ConstantBound bound;
  QSqrt2 lhs_pow;  ///< integral |sum f_j|^{2r}
  QSqrt2 rhs_pow;  ///< integral (sum |f_j|^2)^r
  bool holds = false;
  double ratio_float = 0;  ///< (lhs_pow / rhs_pow)^{1/2r}
};

/// lhs_pow <= c_pow_2r * rhs_pow, decided exactly.
SquareEstimateReport verify_square_estimate(const Family& fam, unsigned r,
                                            const ConstantBound& bound);

struct IntermediateReport {
  unsigned r = 2;
  QSqrt2 lhs_pow;      ///< integral |sum f|^{2r}
  QSqrt2 square_term;  ///< integral S^r, S = sum |f_j|^2
  QSqrt2 mixed_term;   ///< integral S |sum f|^{2r-2}
  QSqrt2 rhs;          ///< ((2r)! - 1)(square_term + mixed_term)
  bool holds = false;
};

/// The integrated pointwise bound for a Type IV family:
/// integral |sum f|^{2r} <= ((2r)! - 1)(integral S^r + integral S |sum f|^{2r-2}).
IntermediateReport verify_intermediate(const Family& fam, unsigned r);

struct DecouplingReport {
  unsigned r = 1;
  ConstantBound bound;
  QSqrt2 lhs_pow;
  /// Certified bracket for (sum_j ||f_j||_{2r}^2)^r; equal when exact.
  QSqrt2 rhs_base_lower;
  QSqrt2 rhs_base_upper;
  bool exact = false;  ///< bracket collapsed to an exact value
  bool holds = false;
};

/// lhs_pow <= c_pow_2r (sum_j lp_power(f_j, 2r)^{1/r})^r. The 1/r-th roots
/// are taken exactly when possible and otherwise bracketed by rationals that
/// are refined up to `max_bits` of precision; throws UndecidedError when the
/// bracket still straddles the threshold.
DecouplingReport verify_decoupling(const Family& fam, unsigned r, const ConstantBound& bound,
                                   unsigned max_bits = 512);

struct HaarSqfnReport {
  unsigned depth = 0;
  std::vector<StepFunction> differences;  ///< D_0 f .. D_{depth-1} f
  bool reconstruction_exact = false;
  bool type_iv = false;
  SquareEstimateReport estimate;
  bool holds() const { return reconstruction_exact && type_iv && estimate.holds; }
};

/// Decomposes a mean-zero f on the depth-`depth` dyadic grid of `root` into
/// martingale differences, checks the reconstruction and Type IV, and
/// verifies the square function estimate for the differences. Throws
/// PreconditionError on nonzero mean or a grid mismatch.
HaarSqfnReport verify_haar_sqfn(const StepFunction& f, const DyadicInterval& root,
                                unsigned depth, unsigned r, const ConstantBound& bound);

}  // namespace superortho
