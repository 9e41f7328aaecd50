#include "superortho/families.hpp"

#include <algorithm>
#include <cmath>

#include "superortho/error.hpp"

namespace superortho {

namespace {

Rational pow2(int e) {
  Rational q = 1;
  if (e >= 0) {
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

// log2 of a positive power of two (numerator or denominator), or -1.
int exact_log2(const mpz_class& z) {
  if (z <= 0) return -1;
  const auto bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  return mpz_popcount(z.get_mpz_t()) == 1 ? static_cast<int>(bits) - 1 : -1;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace

Rational DyadicInterval::length() const { return pow2(k); }
Rational DyadicInterval::left() const { return pow2(k) * Rational(mpz_class(pos)); }
Rational DyadicInterval::right() const { return pow2(k) * Rational(mpz_class(pos + 1)); }

DyadicInterval DyadicInterval::parent() const {
  // Floor division so negative positions map to the enclosing interval.
  const std::int64_t p = pos >= 0 ? pos / 2 : -((-pos + 1) / 2);
  return {k + 1, p};
}

bool DyadicInterval::contains(const DyadicInterval& other) const {
  if (other.k > k) return false;
  const int shift = k - other.k;
  if (shift >= 62) return other.pos >= 0 ? pos == 0 : pos == -1;
  const std::int64_t p = other.pos >= 0 ? other.pos >> shift : -((-other.pos - 1) >> shift) - 1;
  return p == pos;
}

std::string DyadicInterval::label() const {
  return "(" + std::to_string(k) + "," + std::to_string(pos) + ")";
}

std::string DyadicInterval::to_string() const {
  return "[" + superortho::to_string(left()) + "," + superortho::to_string(right()) + ")";
}

DyadicInterval DyadicInterval::parse(std::string_view text) {
  auto fail = [&] { return ParseError("not a dyadic interval: '" + std::string(text) + "'"); };
  if (text.size() < 5 || text.front() != '[' || text.back() != ')') throw fail();
  const std::string_view body = text.substr(1, text.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos) throw fail();
  const Rational lo = parse_rational(body.substr(0, comma));
  const Rational hi = parse_rational(body.substr(comma + 1));
  const Rational len = hi - lo;
  if (sgn(len) <= 0) throw fail();
  int k = 0;
  if (len.get_den() == 1) {
    k = exact_log2(len.get_num());
    if (k < 0) throw fail();
  } else {
    if (len.get_num() != 1 || exact_log2(len.get_den()) < 0) throw fail();
    k = -exact_log2(len.get_den());
  }
  const Rational p = lo / len;
  if (p.get_den() != 1 || !p.get_num().fits_slong_p()) throw fail();
  return {k, p.get_num().get_si()};
}

bool generation_less(const DyadicInterval& a, const DyadicInterval& b) {
  if (a.k != b.k) return a.k > b.k;
  return a.pos < b.pos;
}

StepFunction haar(const DyadicInterval& interval, bool normalized) {
  QSqrt2 height(1);
  if (normalized) {
    // |I|^{-1/2} = 2^{-k/2}; for odd k this is 2^{-(k+1)/2} * sqrt 2.
    if (interval.k % 2 == 0) {
      height = QSqrt2(pow2(-interval.k / 2));
    } else {
      height = QSqrt2(0, pow2(-(interval.k + 1) / 2));
    }
  }
  const DyadicInterval child = interval.left_child();
  return StepFunction({interval.left(), child.right(), interval.right()},
                      {Scalar(height), Scalar(-height)});
}

Family haar_grid(const DyadicInterval& root, unsigned depth) {
  if (depth == 0) throw PreconditionError("haar_grid: depth must be >= 1");
  if (depth > 20) throw PreconditionError("haar_grid: depth above 20 is not supported");
  std::vector<DyadicInterval> intervals;
  for (unsigned g = 0; g < depth; ++g) {
    const std::int64_t count = std::int64_t{1} << g;
    for (std::int64_t i = 0; i < count; ++i) {
      intervals.push_back({root.k - static_cast<int>(g), root.pos * count + i});
    }
  }
  std::vector<Family::Member> members;
  members.reserve(intervals.size());
  for (const auto& I : intervals) members.push_back({I.label(), haar(I)});
  std::vector<DyadicInterval> sorted = intervals;
  std::sort(sorted.begin(), sorted.end(), generation_less);
  std::vector<std::string> ordering;
  ordering.reserve(sorted.size());
  for (const auto& I : sorted) ordering.push_back(I.label());
  return Family(std::move(members), std::move(ordering));
}

StepFunction rademacher(unsigned j, std::int64_t begin, std::int64_t end) {
  if (j == 0) throw PreconditionError("rademacher: j must be >= 1");
  if (end <= begin) throw PreconditionError("rademacher: empty domain");
  if (j > 24 || (end - begin) > (std::int64_t{1} << 24) >> j) {
    throw PreconditionError("rademacher: too many pieces");
  }
  const std::int64_t per_unit = std::int64_t{1} << j;
  const Rational step = pow2(-static_cast<int>(j));
  const std::int64_t cells = (end - begin) * per_unit;
  std::vector<Rational> bp;
  std::vector<Scalar> values;
  bp.reserve(static_cast<std::size_t>(cells) + 1);
  values.reserve(static_cast<std::size_t>(cells));
  // begin * 2^j is even, so the sign only depends on the local cell index.
  for (std::int64_t c = 0; c <= cells; ++c) {
    bp.emplace_back(Rational(mpz_class(begin)) + step * Rational(mpz_class(c)));
    if (c < cells) values.emplace_back(c % 2 == 0 ? 1 : -1);
  }
  return StepFunction(std::move(bp), std::move(values));
}

Family indicator_complement_family(unsigned n) {
  if (n < 2) throw PreconditionError("indicator_complement_family: n must be >= 2");
  std::vector<Family::Member> members;
  members.reserve(n);
  for (unsigned j = 0; j < n; ++j) {
    std::vector<Rational> bp;
    std::vector<Scalar> values;
    if (j > 0) {
      bp.emplace_back(0);
      values.emplace_back(1);
    }
    bp.emplace_back(ratio(j, n));
    values.emplace_back(0);
    bp.emplace_back(ratio(j + 1, n));
    if (j + 1 < n) {
      values.emplace_back(1);
      bp.emplace_back(1);
    }
    for (auto& q : bp) q.canonicalize();
    members.push_back({std::to_string(j), StepFunction(std::move(bp), std::move(values))});
  }
  auto ordering = natural_ordering(members);
  return Family(std::move(members), std::move(ordering));
}

std::uint64_t typeiv_interval_count(const TypeIVConfig& cfg) {
  return binomial(cfg.n, 2 * static_cast<std::uint64_t>(cfg.k) - 2);
}

Family typeiv_construction(const TypeIVConfig& cfg) {
  if (cfg.k < 2) throw PreconditionError("typeiv_construction: k must be >= 2");
  if (cfg.n < 2 * cfg.k - 2) throw PreconditionError("typeiv_construction: need n >= 2k - 2");
  if (!cfg.g.empty() && cfg.g.size() != cfg.n) {
    throw PreconditionError("typeiv_construction: need one g value per index");
  }
  for (const auto& g : cfg.g) {
    if (sgn(g) <= 0) throw PreconditionError("typeiv_construction: g values must be positive");
  }
  const std::uint64_t intervals = typeiv_interval_count(cfg);
  const std::size_t width = 2 * cfg.k - 2;

  // Lexicographic list of strictly increasing tuples from {1..n}.
  std::vector<std::vector<unsigned>> tuples;
  tuples.reserve(intervals);
  std::vector<unsigned> t(width);
  for (std::size_t i = 0; i < width; ++i) t[i] = static_cast<unsigned>(i + 1);
  while (true) {
    tuples.push_back(t);
    std::size_t i = width;
    while (i > 0 && t[i - 1] == cfg.n - (width - i)) --i;
    if (i == 0) break;
    ++t[i - 1];
    for (std::size_t j = i; j < width; ++j) t[j] = t[j - 1] + 1;
  }

  // Piece budget: index i contributes up to intervals * 2^i pieces.
  double pieces = 0;
  for (unsigned i = 1; i <= cfg.n; ++i) pieces += static_cast<double>(intervals) * std::ldexp(1.0, static_cast<int>(i));
  if (pieces > 2e7) throw PreconditionError("typeiv_construction: too many pieces");

  std::vector<Family::Member> members;
  members.reserve(cfg.n);
  for (unsigned i = 1; i <= cfg.n; ++i) {
    const Rational g = cfg.g.empty() ? Rational(1) : cfg.g[i - 1];
    const Rational step = pow2(-static_cast<int>(i));
    const std::int64_t cells = std::int64_t{1} << i;
    std::vector<Rational> bp;
    std::vector<Scalar> values;
    for (std::uint64_t l = 0; l < intervals; ++l) {
      const Rational base(mpz_class(static_cast<unsigned long>(l)));
      const auto& tuple = tuples[l];
      const bool pinned = std::find(tuple.begin(), tuple.end(), i) != tuple.end();
      if (pinned) {
        bp.push_back(base);
        values.emplace_back(g);
        continue;
      }
      for (std::int64_t c = 0; c < cells; ++c) {
        bp.emplace_back(base + step * Rational(mpz_class(c)));
        values.emplace_back(c % 2 == 0 ? Rational(g) : Rational(-g));
      }
    }
    bp.emplace_back(mpz_class(static_cast<unsigned long>(intervals)));
    members.push_back({std::to_string(i), StepFunction(std::move(bp), std::move(values))});
  }
  auto ordering = natural_ordering(members);
  return Family(std::move(members), std::move(ordering));
}

Scalar integral_over(const StepFunction& f, const Rational& lo, const Rational& hi) {
  Scalar total;
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const Rational& a = std::max(bp[i], lo);
    const Rational& b = std::min(bp[i + 1], hi);
    if (a < b) total += f.values()[i] * QSqrt2(Rational(b - a));
  }
  return total;
}

Scalar haar_coefficient(const StepFunction& f, const DyadicInterval& interval) {
  return integral(mul(f, conj(haar(interval))));
}

StepFunction martingale_difference(const StepFunction& f, const DyadicInterval& root,
                                   unsigned level) {
  if (!f.is_zero() && (f.support_begin() < root.left() || root.right() < f.support_end())) {
    throw PreconditionError("martingale_difference: f is not supported in " + root.to_string());
  }
  if (level > 24) throw PreconditionError("martingale_difference: level too deep");
  // On I_l the value is <f,psi_I>|I|^{-1/2} = (int_{I_l} f - int_{I_r} f) / |I|,
  // and its negative on I_r.
  const int k = root.k - static_cast<int>(level);
  const std::int64_t count = std::int64_t{1} << level;
  const Rational inv_len = pow2(-k);
  std::vector<Rational> bp;
  std::vector<Scalar> values;
  bp.reserve(2 * static_cast<std::size_t>(count) + 1);
  for (std::int64_t i = 0; i < count; ++i) {
    const DyadicInterval I{k, root.pos * count + i};
    const DyadicInterval left = I.left_child();
    const Scalar diff = integral_over(f, left.left(), left.right()) -
                        integral_over(f, left.right(), I.right());
    const Scalar v = diff * QSqrt2(inv_len);
    bp.push_back(I.left());
    bp.push_back(left.right());
    values.push_back(v);
    values.push_back(-v);
  }
  bp.push_back(root.right());
  return StepFunction(std::move(bp), std::move(values));
}

bool is_on_dyadic_grid(const StepFunction& f, const DyadicInterval& root, unsigned depth) {
  if (f.is_zero()) return true;
  if (f.support_begin() < root.left() || root.right() < f.support_end()) return false;
  const Rational cell = pow2(root.k - static_cast<int>(depth));
  for (const auto& x : f.breakpoints()) {
    const Rational offset = (x - root.left()) / cell;
    if (offset.get_den() != 1) return false;
  }
  return true;
}

}  // namespace superortho
