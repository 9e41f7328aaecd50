#include "superortho/qk.hpp"

#include <cmath>
#include <functional>

#include "superortho/error.hpp"

namespace superortho {

namespace {

std::size_t common_length(std::span<const Sequence> seqs) {
  if (seqs.empty()) throw PreconditionError("Q_k needs at least one sequence");
  const std::size_t n = seqs.front().size();
  for (const auto& s : seqs) {
    if (s.size() != n) throw PreconditionError("Q_k sequences must share one index set");
  }
  return n;
}

}  // namespace

Scalar sum_s(const Sequence& a) {
  Scalar total;
  for (const auto& x : a) total += x;
  return total;
}

QSqrt2 l2_norm_squared(const Sequence& a) {
  QSqrt2 total;
  for (const auto& x : a) total += x.modulus_squared();
  return total;
}

Sequence pointwise_product(const Sequence& a, const Sequence& b) {
  if (a.size() != b.size()) throw PreconditionError("pointwise product of unequal lengths");
  Sequence out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(a[j] * b[j]);
  return out;
}

Scalar qk_bruteforce(std::span<const Sequence> seqs) {
  const std::size_t n = common_length(seqs);
  const std::size_t k = seqs.size();
  std::vector<bool> used(n, false);
  Scalar total;
  // Depth-first over slots, carrying the running product.
  std::function<void(std::size_t, const Scalar&)> go = [&](std::size_t slot, const Scalar& acc) {
    if (slot == k) {
      total += acc;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      go(slot + 1, acc * seqs[slot][j]);
      used[j] = false;
    }
  };
  go(0, Scalar(1));
  return total;
}

Scalar qk_recursive(std::span<const Sequence> seqs) {
  common_length(seqs);
  const std::size_t k = seqs.size();
  if (k == 1) return sum_s(seqs[0]);
  const std::span<const Sequence> head = seqs.first(k - 1);
  const Sequence& last = seqs[k - 1];
  Scalar result = qk_recursive(head) * sum_s(last);
  std::vector<Sequence> merged(head.begin(), head.end());
  for (std::size_t i = 0; i + 1 < k; ++i) {
    merged[i] = pointwise_product(head[i], last);
    result -= qk_recursive(merged);
    merged[i] = head[i];
  }
  return result;
}

Scalar qk_partition(std::span<const Sequence> seqs) {
  const std::size_t n = common_length(seqs);
  const std::size_t k = seqs.size();
  if (k > 20) throw PreconditionError("qk_partition supports k <= 20");

  // s(prod_{i in mask} a^i) for every nonempty subset.
  const std::size_t subsets = std::size_t{1} << k;
  std::vector<Scalar> subset_sum(subsets);
  {
    std::vector<Sequence> prod(subsets);
    prod[0] = Sequence(n, Scalar(1));
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      prod[mask] = pointwise_product(prod[mask & (mask - 1)], seqs[low]);
      subset_sum[mask] = sum_s(prod[mask]);
    }
  }

  // Block weight (-1)^{m-1} (m-1)!.
  std::vector<Rational> weight(k + 1);
  {
    mpz_class f = 1;
    for (std::size_t m = 1; m <= k; ++m) {
      if (m > 1) f *= static_cast<unsigned long>(m - 1);
      weight[m] = Rational(m % 2 == 1 ? f : mpz_class(-f));
    }
  }

  // Restricted growth strings enumerate set partitions.
  std::vector<std::size_t> block_of(k, 0);
  Scalar total;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t blocks) {
    if (i == k) {
      std::vector<std::size_t> masks(blocks, 0);
      for (std::size_t x = 0; x < k; ++x) masks[block_of[x]] |= std::size_t{1} << x;
      Scalar term(1);
      for (std::size_t mask : masks) {
        term *= subset_sum[mask] * QSqrt2(weight[static_cast<std::size_t>(__builtin_popcountll(mask))]);
      }
      total += term;
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      block_of[i] = b;
      go(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  go(0, 0);
  return total;
}

QkMethod parse_qk_method(std::string_view text) {
  if (text == "brute" || text == "bruteforce") return QkMethod::BruteForce;
  if (text == "recursive") return QkMethod::Recursive;
  if (text == "partition") return QkMethod::Partition;
  throw ParseError("unknown Q_k method '" + std::string(text) + "'");
}

Scalar qk(std::span<const Sequence> seqs, QkMethod method) {
  switch (method) {
    case QkMethod::BruteForce: return qk_bruteforce(seqs);
    case QkMethod::Recursive: return qk_recursive(seqs);
    case QkMethod::Partition: return qk_partition(seqs);
  }
  return qk_partition(seqs);
}

mpz_class factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

std::vector<mpz_class> constant_recursion(unsigned k_max) {
  std::vector<mpz_class> out;
  if (k_max < 2) return out;
  mpz_class c = 1;
  out.push_back(c);
  for (unsigned k = 2; k < k_max; ++k) {
    c = (k + 1) * c + k;
    out.push_back(c);
  }
  return out;
}

namespace {

struct Quantities {
  Scalar product_s{1};
  QSqrt2 A_sq;
  QSqrt2 B_sq;
  QSqrt2 bound_sq;
};

Quantities quantities(std::span<const Sequence> seqs) {
  Quantities q;
  for (const auto& a : seqs) {
    const Scalar s = sum_s(a);
    q.product_s *= s;
    q.A_sq = max(q.A_sq, s.modulus_squared());
    q.B_sq = max(q.B_sq, l2_norm_squared(a));
  }
  const unsigned k = static_cast<unsigned>(seqs.size());
  const Rational c(factorial(k) - 1);
  q.bound_sq = pow(max(q.A_sq, q.B_sq), k - 2) * (q.B_sq * q.B_sq) * Rational(c * c);
  return q;
}

}  // namespace

double QkReport::ratio() const {
  const double rhs = rhs_sq.to_double();
  const double lhs = lhs_sq.to_double();
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(lhs / rhs);
}

QkReport check_inequality(std::span<const Sequence> seqs) {
  common_length(seqs);
  if (seqs.size() < 2) throw PreconditionError("the inequality needs k >= 2");
  QkReport rep;
  rep.k = static_cast<unsigned>(seqs.size());
  const Quantities q = quantities(seqs);
  rep.qk = qk_partition(seqs);
  rep.product_s = q.product_s;
  rep.A_sq = q.A_sq;
  rep.B_sq = q.B_sq;
  rep.lhs_sq = (rep.qk - rep.product_s).modulus_squared();
  rep.rhs_sq = q.bound_sq;
  rep.holds = compare(rep.lhs_sq, rep.rhs_sq) <= 0;
  return rep;
}

RealVariantReport check_real_variant(std::span<const Sequence> seqs) {
  common_length(seqs);
  if (seqs.size() < 2) throw PreconditionError("the inequality needs k >= 2");
  const Quantities q = quantities(seqs);
  if (!q.product_s.is_real()) {
    throw PreconditionError("real variant needs a real product of sums");
  }
  RealVariantReport rep;
  rep.k = static_cast<unsigned>(seqs.size());
  rep.product_s = q.product_s.real();
  rep.re_qk = qk_partition(seqs).real();
  rep.bound_sq = q.bound_sq;
  // P <= R + Re Q with R = sqrt(bound_sq) >= 0: trivially true when
  // P - Re Q <= 0, otherwise compare squares.
  const QSqrt2 d = rep.product_s - rep.re_qk;
  rep.holds = d.sign() <= 0 || compare(d * d, rep.bound_sq) <= 0;
  return rep;
}

}  // namespace superortho
