#pragma once

// Distinct-index multilinear sums
//   Q_k(a^1..a^k) = sum over pairwise distinct j_1..j_k of a^1_{j_1} ... a^k_{j_k}
// evaluated three independent ways, and the exact check of
//   |Q_k - prod_i s(a^i)| <= (k! - 1) B^2 max(A, B)^{k-2}.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "superortho/scalar.hpp"

namespace superortho {

/// Finite sequence indexed by positions 0..size()-1.
using Sequence = std::vector<Scalar>;

/// Plain sum, no absolute values.
Scalar sum_s(const Sequence& a);
/// sum_j |a_j|^2.
QSqrt2 l2_norm_squared(const Sequence& a);
/// Termwise product (ab)_j = a_j b_j.
Sequence pointwise_product(const Sequence& a, const Sequence& b);

/// Direct sum over distinct index tuples; O(|J|^k). Kept as the oracle.
Scalar qk_bruteforce(std::span<const Sequence> seqs);

/// Q_1 = s, and
/// Q_{k+1}(a^1..a^{k+1}) = Q_k(a^1..a^k) s(a^{k+1}) - sum_i Q_k(.., a^i a^{k+1}, ..).
Scalar qk_recursive(std::span<const Sequence> seqs);

/// Sum over set partitions P of {1..k} of
/// prod_{B in P} (-1)^{|B|-1} (|B|-1)! s(prod_{i in B} a^i).
Scalar qk_partition(std::span<const Sequence> seqs);

enum class QkMethod { BruteForce, Recursive, Partition };
QkMethod parse_qk_method(std::string_view text);
Scalar qk(std::span<const Sequence> seqs, QkMethod method);

struct QkReport {
  unsigned k = 0;
  Scalar qk;
  Scalar product_s;  ///< prod_i s(a^i)
  QSqrt2 A_sq;       ///< max_i |s(a^i)|^2
  QSqrt2 B_sq;       ///< max_i ||a^i||^2
  QSqrt2 lhs_sq;     ///< |qk - product_s|^2
  QSqrt2 rhs_sq;     ///< (k!-1)^2 B_sq^2 max(A_sq, B_sq)^{k-2}
  bool holds = false;

  /// sqrt(lhs_sq / rhs_sq) in floating point; diagnostics only.
  double ratio() const;
};

/// All comparisons are made on squares so A and B never need square roots.
/// Throws PreconditionError for k < 2.
QkReport check_inequality(std::span<const Sequence> seqs);

struct RealVariantReport {
  unsigned k = 0;
  QSqrt2 product_s;  ///< real by precondition
  QSqrt2 re_qk;
  QSqrt2 bound_sq;   ///< ((k!-1) B^2 max(A,B)^{k-2})^2
  bool holds = false;
};

/// prod_i s(a^i) <= (k!-1) B^2 max(A,B)^{k-2} + Re Q_k, for real products.
/// Throws PreconditionError when the product has a nonzero imaginary part.
RealVariantReport check_real_variant(std::span<const Sequence> seqs);

mpz_class factorial(unsigned k);

/// C_2 = 1, C_{k+1} = (k+1) C_k + k; element i holds C_{i+2}.
std::vector<mpz_class> constant_recursion(unsigned k_max);

}  // namespace superortho
