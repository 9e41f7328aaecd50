#pragma once

// Zone predicates for the superorthogonality types, canonical enumeration of
// 2r-tuple classes, exact product integrals, and family classification.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superortho/stepfn.hpp"

namespace superortho {

enum class SuperType { IStar, I, II, III, IV };

inline constexpr std::array<SuperType, 5> kAllTypes = {SuperType::IStar, SuperType::I,
                                                       SuperType::II, SuperType::III,
                                                       SuperType::IV};

/// "I*", "I", "II", "III", "IV".
std::string_view name(SuperType t);
/// Accepts the names above and "IStar"; throws ParseError otherwise.
SuperType parse_super_type(std::string_view text);
/// Comma-separated list, e.g. "IV,II".
std::vector<SuperType> parse_super_types(std::string_view text);

/// Member ranks under a total order (0 = smallest), as stored in Family.
using Ranks = std::optional<std::vector<std::size_t>>;

/// All 2r-tuples whose first r entries permute `left` and whose last r
/// (conjugated) entries permute `right`. Entries are member positions.
struct TupleClass {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;

  /// Sorts both halves.
  TupleClass& canonicalize();
  /// Canonical class of a raw 2r-tuple.
  static TupleClass from_tuple(std::span<const std::size_t> tuple);
  std::size_t r() const { return left.size(); }
  /// Both halves merged and sorted.
  std::vector<std::size_t> combined() const;

  friend bool operator==(const TupleClass&, const TupleClass&) = default;
  friend auto operator<=>(const TupleClass&, const TupleClass&) = default;
};

/// Zone membership. Z(IV): all 2r entries distinct. Z(III): the largest
/// entry under `ranks` occurs exactly once. Z(II): some entry occurs exactly
/// once. Z(I): some entry occurs an odd number of times. Z(I*): left is not a
/// permutation of right. Throws PreconditionError for III without ranks.
bool in_zone(SuperType t, const TupleClass& cls, const Ranks& ranks = std::nullopt);

/// How the two halves of a class are identified during enumeration.
enum class SideMode {
  Ordered,   ///< every (left, right) pair
  Merged,    ///< (left, right) ~ (right, left); keeps left <= right
  Combined,  ///< one class per combined multiset, split as (first r | last r)
};

/// Visits each canonical class in Z(t) exactly once in lexicographic order.
/// Combined mode is only sound when integrands are conjugation invariant,
/// i.e. for real families. Stops early when `visit` returns false.
void for_each_class(std::size_t n, unsigned r, SuperType t, const Ranks& ranks, SideMode mode,
                    const std::function<bool(const TupleClass&)>& visit);

std::vector<TupleClass> enumerate_classes(std::size_t n, unsigned r, SuperType t,
                                          const Ranks& ranks = std::nullopt,
                                          SideMode mode = SideMode::Ordered);

/// Exact evaluator of class integrals for one family; samples the family on
/// a common grid once.
class ProductEvaluator {
 public:
  explicit ProductEvaluator(const Family& fam);

  /// Integral of prod_{left} f_j * prod_{right} conj(f_j).
  Scalar integral(const TupleClass& cls) const;
  /// Same integrand for a raw tuple in slot order.
  Scalar integral_of_tuple(std::span<const std::size_t> tuple) const;

  const CommonGrid& grid() const { return grid_; }

 private:
  CommonGrid grid_;
  std::vector<Rational> widths_;
};

/// Throws PreconditionError for labels that are not members.
Scalar product_integral(const Family& fam, const TupleClass& cls);

struct TypeVerdict {
  enum class Status { Holds, Fails, NotApplicable };
  Status status = Status::Holds;
  /// Classes in the zone that were evaluated; when failing, counts up to and
  /// including the witness.
  std::uint64_t classes_checked = 0;
  std::optional<TupleClass> witness;
  std::optional<Scalar> witness_integral;
  std::string note;

  bool holds() const { return status == Status::Holds; }
};

struct ClassificationReport {
  unsigned r = 0;
  std::map<SuperType, TypeVerdict> verdicts;

  /// True when no requested, applicable type fails.
  bool all_hold() const;
};

struct ClassifyOptions {
  /// Worker threads; 0 reads SUPERORTHO_THREADS, else hardware concurrency.
  unsigned threads = 0;
  /// Use the checked fixed-width kernel (exact fallback on overflow).
  bool fast_kernel = true;
};

/// For each requested type, holds iff every class in the zone integrates to
/// zero. The witness is the first violating class in enumeration order.
/// III on an unordered family is NotApplicable.
ClassificationReport classify(const Family& fam, unsigned r, std::span<const SuperType> types,
                              const ClassifyOptions& options = {});

/// Exact evaluation over every Ordered class; the oracle for classify.
ClassificationReport classify_reference(const Family& fam, unsigned r,
                                        std::span<const SuperType> types);

/// Exact evaluation over all n^{2r} raw tuples.
ClassificationReport classify_naive(const Family& fam, unsigned r,
                                    std::span<const SuperType> types);

struct ZoneInclusion {
  SuperType inner;
  SuperType outer;
  std::uint64_t inner_count = 0;
  std::uint64_t outer_count = 0;
  bool included = false;
  /// A raw tuple in the outer zone but not in the inner one.
  std::optional<std::vector<std::size_t>> strictness_witness;
};

struct ZoneInclusionReport {
  std::size_t n = 0;
  unsigned r = 0;
  std::vector<ZoneInclusion> inclusions;  // IV<III, III<II, II<I, I<I*

  bool all_strict() const;
};

/// Exhaustive check over all n^{2r} tuples, with ranks[i] = i.
ZoneInclusionReport check_zone_inclusions(std::size_t n, unsigned r);

/// Labels of a class for reporting.
std::vector<std::string> labels_of(const Family& fam, std::span<const std::size_t> members);

unsigned resolve_thread_count(unsigned requested);

}  // namespace superortho
