#pragma once

// Compactly supported piecewise-constant functions on the real line with
// rational breakpoints, and finite indexed families of them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superortho/scalar.hpp"

namespace superortho {

/// A function that takes values[i] on [breakpoints[i], breakpoints[i+1]) and
/// vanishes outside [breakpoints.front(), breakpoints.back()).
///
/// Always stored in canonical form: adjacent pieces carry different values,
/// the first and last pieces are nonzero, and the zero function has no
/// breakpoints at all. Structural equality is therefore pointwise equality.
class StepFunction {
 public:
  StepFunction() = default;

  /// Throws PreconditionError unless breakpoints are strictly increasing and
  /// there is exactly one more breakpoint than values.
  StepFunction(std::vector<Rational> breakpoints, std::vector<Scalar> values);

  /// c * 1_[lo, hi).
  static StepFunction constant(const Rational& lo, const Rational& hi, const Scalar& c);
  static StepFunction indicator(const Rational& lo, const Rational& hi) {
    return constant(lo, hi, Scalar(1));
  }

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Scalar>& values() const { return values_; }
  std::size_t piece_count() const { return values_.size(); }
  bool is_zero() const { return values_.empty(); }
  bool is_real() const;

  /// Left end of the support; only meaningful when !is_zero().
  const Rational& support_begin() const { return breakpoints_.front(); }
  /// Right end of the support; only meaningful when !is_zero().
  const Rational& support_end() const { return breakpoints_.back(); }

  Scalar operator()(const Rational& x) const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Scalar> values_;
};

/// Several step functions sampled on one shared partition. values[f][c] is
/// the value of the f-th function on [breakpoints[c], breakpoints[c+1]).
struct CommonGrid {
  std::vector<Rational> breakpoints;
  std::vector<std::vector<Scalar>> values;

  std::size_t cell_count() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
  std::vector<Rational> widths() const;
  StepFunction function(std::size_t f) const;
};

/// Samples every function on the sorted union of all breakpoints.
CommonGrid common_grid(std::span<const StepFunction> fns);

/// Both functions on the union of their breakpoint lists.
CommonGrid refine(const StepFunction& f, const StepFunction& g);

StepFunction add(const StepFunction& f, const StepFunction& g);
StepFunction sub(const StepFunction& f, const StepFunction& g);
StepFunction mul(const StepFunction& f, const StepFunction& g);
StepFunction scale(const StepFunction& f, const Scalar& c);
StepFunction conj(const StepFunction& f);
/// |f|^2 as a real-valued step function.
StepFunction abs_squared(const StepFunction& f);

inline StepFunction operator+(const StepFunction& f, const StepFunction& g) { return add(f, g); }
inline StepFunction operator-(const StepFunction& f, const StepFunction& g) { return sub(f, g); }
inline StepFunction operator*(const StepFunction& f, const StepFunction& g) { return mul(f, g); }
inline StepFunction operator*(const Scalar& c, const StepFunction& f) { return scale(f, c); }

/// Exact Lebesgue integral.
Scalar integral(const StepFunction& f);

/// Integral of |f|^p for even p >= 2, i.e. the p-th power of the L^p norm.
QSqrt2 lp_power(const StepFunction& f, unsigned p);

/// Finite indexed collection of step functions.
///
/// Members are addressed by position 0..size()-1 and carry pairwise distinct
/// string labels. An optional total order on the labels is stored as a rank
/// per member (0 = smallest).
class Family {
 public:
  struct Member {
    std::string label;
    StepFunction fn;
  };

  Family() = default;
  /// `ordering`, when present, lists every label exactly once in ascending
  /// order.
  explicit Family(std::vector<Member> members,
                  std::optional<std::vector<std::string>> ordering = std::nullopt);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Member>& members() const { return members_; }
  const StepFunction& fn(std::size_t i) const { return members_.at(i).fn; }
  const std::string& label(std::size_t i) const { return members_.at(i).label; }
  std::size_t index_of(const std::string& label) const;

  bool is_real() const { return real_; }

  bool has_ordering() const { return ranks_.has_value(); }
  const std::optional<std::vector<std::size_t>>& ranks() const { return ranks_; }
  /// Labels in ascending order; empty when the family is unordered.
  std::vector<std::string> ordering_labels() const;

  std::vector<StepFunction> functions() const;
  StepFunction sum() const;

 private:
  std::vector<Member> members_;
  std::optional<std::vector<std::size_t>> ranks_;
  bool real_ = true;
};

/// Ascending numeric order of integer labels; throws PreconditionError when a
/// label is not an integer.
std::vector<std::string> natural_ordering(const std::vector<Family::Member>& members);

/// Integral of (sum_j |f_j|^2)^r, the 2r-th power of the L^{2r} norm of the
/// square function.
QSqrt2 square_function_power(const Family& fam, unsigned r);

}  // namespace superortho
