#pragma once

// Constructors for the concrete families: Haar functions on dyadic
// intervals, Rademacher functions, the indicator-complement family, the
// Rademacher-based Type IV construction, and dyadic martingale differences.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "superortho/stepfn.hpp"

namespace superortho {

/// I = [2^k * pos, 2^k * (pos + 1)).
struct DyadicInterval {
  int k = 0;
  std::int64_t pos = 0;

  Rational length() const;
  Rational left() const;
  Rational right() const;
  DyadicInterval left_child() const { return {k - 1, 2 * pos}; }
  DyadicInterval right_child() const { return {k - 1, 2 * pos + 1}; }
  DyadicInterval parent() const;
  /// Non-strict containment.
  bool contains(const DyadicInterval& other) const;

  /// "(k,pos)".
  std::string label() const;
  /// "[a,b)" with rational endpoints.
  std::string to_string() const;
  /// Parses "[a,b)"; throws ParseError unless the interval is dyadic.
  static DyadicInterval parse(std::string_view text);

  friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Generation-major order used for the Type III ordering of Haar families:
/// intervals are compared by (-k, pos), so finer intervals rank above coarser
/// ones and intervals of one generation rank left to right.
bool generation_less(const DyadicInterval& a, const DyadicInterval& b);

/// |I|^{-1/2} (1_{I_l} - 1_{I_r}), or the unnormalized difference.
StepFunction haar(const DyadicInterval& interval, bool normalized = true);

/// Haar functions of every dyadic subinterval of `root` down to `depth`
/// generations (2^depth - 1 members, coarse to fine), ordered by
/// generation_less.
Family haar_grid(const DyadicInterval& root, unsigned depth);

/// (-1)^floor(2^j t) restricted to [begin, end).
StepFunction rademacher(unsigned j, std::int64_t begin, std::int64_t end);

/// f_j = 1 on [0,1) minus I_j = [j/n, (j+1)/n), labels "0".."n-1", natural
/// ordering.
Family indicator_complement_family(unsigned n);

struct TypeIVConfig {
  unsigned k = 2;   ///< tuples have length 2k
  unsigned n = 2;   ///< indices 1..n
  /// Positive constant g_i per index; empty means every g_i = 1.
  std::vector<Rational> g;
};

/// C(n, 2k-2): number of unit intervals used by typeiv_construction.
std::uint64_t typeiv_interval_count(const TypeIVConfig& cfg);

/// Finite truncation of the Rademacher-based construction: unit interval
/// [l, l+1) is assigned to the l-th strictly increasing (2k-2)-tuple of
/// {1..n} in lexicographic order, and on it f_i = g_i r_i when i is not in
/// the tuple, f_i = g_i otherwise. Labels "1".."n", natural ordering.
Family typeiv_construction(const TypeIVConfig& cfg);

/// Integral of f over [lo, hi).
Scalar integral_over(const StepFunction& f, const Rational& lo, const Rational& hi);

/// <f, psi_I> = integral of f * conj(psi_I).
Scalar haar_coefficient(const StepFunction& f, const DyadicInterval& interval);

/// D_m f: sum of <f, psi_I> psi_I over I inside `root` with
/// |I| = |root| 2^{-m}. Throws PreconditionError when f is not supported in
/// root.
StepFunction martingale_difference(const StepFunction& f, const DyadicInterval& root,
                                   unsigned level);

/// True when f is supported in root and constant on each cell of length
/// |root| 2^{-depth}.
bool is_on_dyadic_grid(const StepFunction& f, const DyadicInterval& root, unsigned depth);

}  // namespace superortho
