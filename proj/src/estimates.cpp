#include "superortho/estimates.hpp"

#include <cmath>
#include <optional>

#include "superortho/classifier.hpp"
#include "superortho/error.hpp"
#include "superortho/qk.hpp"

namespace superortho {

std::string_view name(BoundMethod m) {
  switch (m) {
    case BoundMethod::Paper: return "paper";
    case BoundMethod::Optimized: return "optimized";
    case BoundMethod::User: return "user";
  }
  return "?";
}

BoundMethod parse_bound_method(std::string_view text) {
  if (text == "paper") return BoundMethod::Paper;
  if (text == "optimized") return BoundMethod::Optimized;
  if (text == "user") return BoundMethod::User;
  throw ParseError("unknown constant method '" + std::string(text) + "'");
}

ConstantBound constant_bound(unsigned r, BoundMethod method) {
  if (r < 1) throw PreconditionError("constant_bound: r must be >= 1");
  ConstantBound b;
  b.r = r;
  b.method = method;
  if (method == BoundMethod::User) {
    throw PreconditionError("constant_bound: use user_bound for caller-supplied constants");
  }
  if (r == 1) {
    if (method == BoundMethod::Optimized) {
      throw PreconditionError("constant_bound: the optimized constant needs r >= 2");
    }
    b.c_pow_2r = 1;
    return b;
  }
  const Rational K(factorial(2 * r) - 1);
  if (method == BoundMethod::Paper) {
    b.c_pow_2r = pow(Rational(2), r) * pow(K, r);
    return b;
  }
  const Rational rr(r);
  const Rational E = pow(Rational(2 * (r - 1) * K / rr), r - 1);
  b.c_pow_2r = 2 * K * (1 + E / rr);
  return b;
}

ConstantBound user_bound(unsigned r, const Rational& c_pow_2r) {
  if (r < 1) throw PreconditionError("user_bound: r must be >= 1");
  if (c_pow_2r < 1) throw PreconditionError("user_bound: C^{2r} must be >= 1");
  return {r, c_pow_2r, BoundMethod::User};
}

SquareEstimateReport verify_square_estimate(const Family& fam, unsigned r,
                                            const ConstantBound& bound) {
  if (fam.empty()) throw PreconditionError("verify_square_estimate: empty family");
  if (r < 1) throw PreconditionError("verify_square_estimate: r must be >= 1");
  SquareEstimateReport rep;
  rep.r = r;
  rep.bound = bound;
  rep.lhs_pow = lp_power(fam.sum(), 2 * r);
  rep.rhs_pow = square_function_power(fam, r);
  rep.holds = compare(rep.lhs_pow, rep.rhs_pow * bound.c_pow_2r) <= 0;
  const double rhs = rep.rhs_pow.to_double();
  rep.ratio_float = rhs > 0 ? std::pow(rep.lhs_pow.to_double() / rhs, 1.0 / (2.0 * r)) : 0.0;
  return rep;
}

IntermediateReport verify_intermediate(const Family& fam, unsigned r) {
  if (r < 2) throw PreconditionError("verify_intermediate: r must be >= 2");
  if (fam.empty()) throw PreconditionError("verify_intermediate: empty family");
  IntermediateReport rep;
  rep.r = r;
  const auto fns = fam.functions();
  const CommonGrid grid = common_grid(fns);
  const auto widths = grid.widths();
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    Scalar total;
    QSqrt2 sq;
    for (const auto& row : grid.values) {
      total += row[c];
      sq += row[c].modulus_squared();
    }
    const QSqrt2 mod = total.modulus_squared();
    const QSqrt2 mod_pow = pow(mod, r - 1);
    rep.lhs_pow += mod_pow * mod * widths[c];
    rep.square_term += pow(sq, r) * widths[c];
    rep.mixed_term += sq * mod_pow * widths[c];
  }
  rep.rhs = (rep.square_term + rep.mixed_term) * Rational(factorial(2 * r) - 1);
  rep.holds = compare(rep.lhs_pow, rep.rhs) <= 0;
  return rep;
}

namespace {

std::optional<Rational> exact_root(const QSqrt2& t, unsigned r) {
  if (!t.is_rational()) return std::nullopt;
  const Rational& q = t.rational_part();
  if (sgn(q) < 0) return std::nullopt;
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), q.get_num_mpz_t(), r) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), q.get_den_mpz_t(), r) == 0) return std::nullopt;
  return Rational(num, den);
}

struct Bracket {
  Rational lo;
  Rational hi;
};

// lo^r <= t <= hi^r with 0 <= lo.
Bracket initial_bracket(const QSqrt2& t, unsigned r) {
  const double x = std::pow(t.to_double(), 1.0 / r);
  if (std::isfinite(x) && x > 0) {
    Bracket b{Rational(x * (1 - 1e-9)), Rational(x * (1 + 1e-9))};
    if (compare(QSqrt2(pow(b.lo, r)), t) <= 0 && compare(t, QSqrt2(pow(b.hi, r))) <= 0) return b;
  }
  Bracket b{0, 1};
  while (compare(QSqrt2(pow(b.hi, r)), t) < 0) b.hi *= 2;
  return b;
}

void bisect(Bracket& b, const QSqrt2& t, unsigned r) {
  Rational mid = (b.lo + b.hi) / 2;
  if (compare(QSqrt2(pow(mid, r)), t) <= 0) {
    b.lo = std::move(mid);
  } else {
    b.hi = std::move(mid);
  }
}

}  // namespace

DecouplingReport verify_decoupling(const Family& fam, unsigned r, const ConstantBound& bound,
                                   unsigned max_bits) {
  if (fam.empty()) throw PreconditionError("verify_decoupling: empty family");
  if (r < 1) throw PreconditionError("verify_decoupling: r must be >= 1");
  DecouplingReport rep;
  rep.r = r;
  rep.bound = bound;
  rep.lhs_pow = lp_power(fam.sum(), 2 * r);

  // Group equal terms: sum_j t_j^{1/r} = sum_g m_g t_g^{1/r}.
  std::vector<std::pair<QSqrt2, unsigned long>> groups;
  for (const auto& m : fam.members()) {
    const QSqrt2 t = lp_power(m.fn, 2 * r);
    if (t.is_zero()) continue;
    bool merged = false;
    for (auto& [value, count] : groups) {
      if (value == t) {
        ++count;
        merged = true;
        break;
      }
    }
    if (!merged) groups.emplace_back(t, 1);
  }

  auto decide_exact = [&](const QSqrt2& base) {
    rep.exact = true;
    rep.rhs_base_lower = rep.rhs_base_upper = base;
    rep.holds = compare(rep.lhs_pow, base * bound.c_pow_2r) <= 0;
    return rep;
  };

  if (groups.empty()) return decide_exact(QSqrt2());
  if (groups.size() == 1) {
    // (m t^{1/r})^r = m^r t.
    return decide_exact(groups[0].first * pow(Rational(groups[0].second), r));
  }

  std::vector<std::optional<Rational>> roots;
  bool all_exact = true;
  for (const auto& [t, count] : groups) {
    roots.push_back(exact_root(t, r));
    all_exact = all_exact && roots.back().has_value();
  }
  if (all_exact) {
    Rational s = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) s += *roots[g] * groups[g].second;
    return decide_exact(QSqrt2(pow(s, r)));
  }

  std::vector<Bracket> brackets;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (roots[g]) {
      brackets.push_back({*roots[g], *roots[g]});
    } else {
      brackets.push_back(initial_bracket(groups[g].first, r));
    }
  }
  for (unsigned bits = 0;; bits += 8) {
    Rational lo = 0, hi = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      lo += brackets[g].lo * groups[g].second;
      hi += brackets[g].hi * groups[g].second;
    }
    rep.rhs_base_lower = QSqrt2(pow(lo, r));
    rep.rhs_base_upper = QSqrt2(pow(hi, r));
    if (compare(rep.lhs_pow, rep.rhs_base_lower * bound.c_pow_2r) <= 0) {
      rep.holds = true;
      return rep;
    }
    if (compare(rep.lhs_pow, rep.rhs_base_upper * bound.c_pow_2r) > 0) {
      rep.holds = false;
      return rep;
    }
    if (bits >= max_bits) {
      throw UndecidedError("verify_decoupling: comparison undecided at " +
                           std::to_string(max_bits) + " bits");
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (roots[g]) continue;
      for (int i = 0; i < 8; ++i) bisect(brackets[g], groups[g].first, r);
    }
  }
}

HaarSqfnReport verify_haar_sqfn(const StepFunction& f, const DyadicInterval& root,
                                unsigned depth, unsigned r, const ConstantBound& bound) {
  if (depth == 0) throw PreconditionError("verify_haar_sqfn: depth must be >= 1");
  if (!is_on_dyadic_grid(f, root, depth)) {
    throw PreconditionError("verify_haar_sqfn: f is not constant on the depth-" +
                            std::to_string(depth) + " grid of " + root.to_string());
  }
  if (!integral(f).is_zero()) throw PreconditionError("verify_haar_sqfn: f must have mean zero");

  HaarSqfnReport rep;
  rep.depth = depth;
  std::vector<Family::Member> members;
  StepFunction total;
  for (unsigned m = 0; m < depth; ++m) {
    StepFunction d = martingale_difference(f, root, m);
    total = total + d;
    rep.differences.push_back(d);
    members.push_back({"D" + std::to_string(m), std::move(d)});
  }
  rep.reconstruction_exact = total == f;
  const Family fam(std::move(members));
  const SuperType iv[] = {SuperType::IV};
  rep.type_iv = classify(fam, r, iv).all_hold();
  rep.estimate = verify_square_estimate(fam, r, bound);
  return rep;
}

}  // namespace superortho
