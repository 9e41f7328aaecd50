#pragma once

// Fast zone scan: the family is rescaled so every value has integer
// components in Z[sqrt 2][i], and class integrals are accumulated in checked
// 128-bit arithmetic with prefix products shared along the enumeration tree.
// Zero-ness is invariant under the positive rescaling; any overflow sends the
// affected classes to the exact evaluator.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "superortho/classifier.hpp"

namespace superortho::detail {

struct ScanResult {
  std::uint64_t checked = 0;
  /// Slots of the first violating class: left half, then right half.
  std::optional<std::vector<std::size_t>> witness;
  std::uint64_t exact_fallbacks = 0;
};

/// Zone test on the sorted combined multiset; `left` and `right` must be
/// sorted.
bool zone_of_sorted(SuperType t, std::span<const std::size_t> all,
                    std::span<const std::size_t> left, std::span<const std::size_t> right,
                    const Ranks& ranks);

/// Scans Z(t) in the order of for_each_class with SideMode::Combined for
/// real families and SideMode::Merged otherwise.
ScanResult scan_zone(const Family& fam, const ProductEvaluator& exact, unsigned r, SuperType t,
                     unsigned threads);

}  // namespace superortho::detail
