#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "../src/class_kernel.hpp"
#include "doctest.h"
#include "superortho/classifier.hpp"
#include "superortho/error.hpp"
#include "superortho/families.hpp"
#include "test_util.hpp"

using namespace superortho;
using testutil::R;

namespace {

using Tuple = std::vector<std::size_t>;

const DyadicInterval kUnit{0, 0};

Ranks identity_ranks(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

// Zone membership from the raw tuple, written directly from the definitions.
bool zone_oracle(SuperType t, const Tuple& tuple, const Ranks& ranks) {
  const std::size_t r = tuple.size() / 2;
  std::map<std::size_t, std::size_t> mult;
  for (std::size_t j : tuple) ++mult[j];
  switch (t) {
    case SuperType::IV:
      return mult.size() == tuple.size();
    case SuperType::III: {
      std::size_t top = tuple[0];
      for (std::size_t j : tuple) {
        if ((*ranks)[j] > (*ranks)[top]) top = j;
      }
      return mult[top] == 1;
    }
    case SuperType::II:
      return std::any_of(mult.begin(), mult.end(), [](auto& p) { return p.second == 1; });
    case SuperType::I:
      return std::any_of(mult.begin(), mult.end(), [](auto& p) { return p.second % 2 == 1; });
    case SuperType::IStar:
      return !std::is_permutation(tuple.begin(), tuple.begin() + r, tuple.begin() + r, tuple.end());
  }
  return false;
}

void for_each_tuple(std::size_t n, std::size_t len, const std::function<void(const Tuple&)>& f) {
  Tuple t(len, 0);
  while (true) {
    f(t);
    std::size_t i = 0;
    while (i < len && ++t[i] == n) t[i++] = 0;
    if (i == len) return;
  }
}

std::set<Tuple> expand(const TupleClass& cls) {
  std::set<Tuple> out;
  Tuple l = cls.left, r = cls.right;
  std::sort(l.begin(), l.end());
  do {
    std::sort(r.begin(), r.end());
    do {
      Tuple t = l;
      t.insert(t.end(), r.begin(), r.end());
      out.insert(t);
    } while (std::next_permutation(r.begin(), r.end()));
  } while (std::next_permutation(l.begin(), l.end()));
  return out;
}

Family make_family(const std::vector<StepFunction>& fns, bool ordered = true) {
  std::vector<Family::Member> m;
  for (std::size_t i = 0; i < fns.size(); ++i) m.push_back({std::to_string(i), fns[i]});
  if (!ordered) return Family(std::move(m));
  auto order = natural_ordering(m);
  return Family(std::move(m), order);
}

std::map<SuperType, TypeVerdict::Status> statuses(const ClassificationReport& rep) {
  std::map<SuperType, TypeVerdict::Status> out;
  for (const auto& [t, v] : rep.verdicts) out[t] = v.status;
  return out;
}

void check_witnesses(const Family& fam, const ClassificationReport& rep) {
  for (const auto& [t, v] : rep.verdicts) {
    if (v.status != TypeVerdict::Status::Fails) {
      CHECK_FALSE(v.witness.has_value());
      continue;
    }
    REQUIRE(v.witness.has_value());
    CHECK(in_zone(t, *v.witness, fam.ranks()));
    Tuple t2 = v.witness->left;
    t2.insert(t2.end(), v.witness->right.begin(), v.witness->right.end());
    const Scalar oracle = testutil::sampled_tuple_integral(fam, t2);
    CHECK_FALSE(oracle.is_zero());
    CHECK(*v.witness_integral == oracle);
  }
}

void check_monotone(const ClassificationReport& rep) {
  const SuperType chain[] = {SuperType::IStar, SuperType::I, SuperType::II, SuperType::III,
                             SuperType::IV};
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    const auto a = rep.verdicts.find(chain[i]);
    const auto b = rep.verdicts.find(chain[i + 1]);
    if (a == rep.verdicts.end() || b == rep.verdicts.end()) continue;
    if (a->second.status == TypeVerdict::Status::NotApplicable ||
        b->second.status == TypeVerdict::Status::NotApplicable) {
      continue;
    }
    if (a->second.holds()) CHECK(b->second.holds());
  }
}

// Families that pass some types and fail others.
std::vector<Family> sample_families(Rng& rng) {
  std::vector<Family> out;
  out.push_back(indicator_complement_family(4));
  out.push_back(indicator_complement_family(5));
  out.push_back(haar_grid(kUnit, 2));
  out.push_back(haar_grid(kUnit, 3));
  out.push_back(make_family({haar(kUnit), haar({-1, 0}), haar({-2, 0}), haar({-2, 3}), haar({1, 0})}));
  out.push_back(make_family({rademacher(1, 0, 1), rademacher(2, 0, 1), rademacher(3, 0, 1), rademacher(4, 0, 1)}));
  // Complex: Haar times unimodular-ish constants.
  out.push_back(make_family({scale(haar(kUnit), Scalar::i()), haar({-1, 0}),
                             scale(haar({-1, 1}), Scalar(1) + Scalar::i()), haar({-2, 1})}));
  out.push_back(make_family({StepFunction::constant(0, 1, Scalar::i()), StepFunction::constant(0, 1, Scalar(1)),
                             StepFunction::constant(1, 2, Scalar(1) - Scalar::i())}));
  out.push_back(make_family({scale(rademacher(1, 0, 1), Scalar::i()), rademacher(2, 0, 1), rademacher(3, 0, 1)}));
  for (int t = 0; t < 6; ++t) {
    std::vector<StepFunction> fns;
    const int n = static_cast<int>(rng.uniform(2, 5));
    for (int i = 0; i < n; ++i) fns.push_back(testutil::random_step(rng, t % 2 == 1));
    out.push_back(make_family(fns));
  }
  out.push_back(make_family({StepFunction(), haar(kUnit), StepFunction()}));
  out.push_back(make_family({haar(kUnit)}, false));
  return out;
}

}  // namespace

TEST_CASE("type names round trip") {
  for (SuperType t : kAllTypes) CHECK(parse_super_type(name(t)) == t);
  CHECK(parse_super_type("IStar") == SuperType::IStar);
  CHECK(parse_super_types("IV, II") == std::vector<SuperType>{SuperType::IV, SuperType::II});
  CHECK_THROWS_AS(parse_super_type("V"), ParseError);
  CHECK_THROWS_AS(parse_super_types(""), ParseError);
}

TEST_CASE("tuple classes") {
  const Tuple t = {3, 1, 2, 0};
  const TupleClass c = TupleClass::from_tuple(t);
  CHECK(c.left == Tuple{1, 3});
  CHECK(c.right == Tuple{0, 2});
  CHECK(c.combined() == Tuple{0, 1, 2, 3});
  CHECK(c.r() == 2);
  CHECK_THROWS_AS(TupleClass::from_tuple(Tuple{1, 2, 3}), PreconditionError);
}

TEST_CASE("in_zone examples") {
  const Ranks ranks = identity_ranks(5);
  auto cls = [](Tuple l, Tuple r) { return TupleClass{std::move(l), std::move(r)}.canonicalize(); };
  for (SuperType t : kAllTypes) CHECK(in_zone(t, cls({1, 2}, {3, 4}), ranks));

  const TupleClass c = cls({1, 1}, {2, 3});
  CHECK_FALSE(in_zone(SuperType::IV, c, ranks));
  CHECK(in_zone(SuperType::III, c, ranks));
  CHECK(in_zone(SuperType::II, c, ranks));
  CHECK(in_zone(SuperType::I, c, ranks));
  CHECK(in_zone(SuperType::IStar, c, ranks));

  const TupleClass e = cls({1, 1}, {2, 2});
  CHECK_FALSE(in_zone(SuperType::I, e, ranks));
  CHECK(in_zone(SuperType::IStar, e, ranks));
  CHECK_FALSE(in_zone(SuperType::IStar, cls({1, 2}, {2, 1}), ranks));
  CHECK_FALSE(in_zone(SuperType::III, cls({3, 3}, {1, 2}), ranks));

  CHECK_THROWS_AS(in_zone(SuperType::III, c), PreconditionError);
}

TEST_CASE("zone predicates agree with the raw-tuple oracle and are class invariant") {
  Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 6));
    const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
    std::vector<std::size_t> ranks(n);
    for (std::size_t i = 0; i < n; ++i) ranks[i] = i;
    std::shuffle(ranks.begin(), ranks.end(), std::mt19937_64(trial));
    Tuple t(2 * r);
    for (auto& x : t) x = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
    Tuple p = t;
    std::shuffle(p.begin(), p.begin() + r, std::mt19937_64(trial + 1));
    std::shuffle(p.begin() + r, p.end(), std::mt19937_64(trial + 2));
    for (SuperType type : kAllTypes) {
      const bool expected = zone_oracle(type, t, ranks);
      CHECK(in_zone(type, TupleClass::from_tuple(t), ranks) == expected);
      CHECK(zone_oracle(type, p, ranks) == expected);
    }
  }
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_classes(4, 1, SuperType::IV).size() == 12);
  CHECK(enumerate_classes(4, 2, SuperType::IV).size() == 6);
  CHECK(enumerate_classes(4, 2, SuperType::IV, std::nullopt, SideMode::Merged).size() == 3);
  CHECK(enumerate_classes(4, 2, SuperType::IV, std::nullopt, SideMode::Combined).size() == 1);
  CHECK(enumerate_classes(2, 2, SuperType::IV).empty());
  CHECK(enumerate_classes(10, 2, SuperType::IV, std::nullopt, SideMode::Combined).size() == 210);
  CHECK(enumerate_classes(10, 2, SuperType::IV).size() == 210 * 6);
  CHECK_THROWS_AS(enumerate_classes(3, 2, SuperType::III), PreconditionError);
}

TEST_CASE("enumeration is complete, unique and ordered") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (unsigned r = 1; r <= 2; ++r) {
      const Ranks ranks = identity_ranks(n);
      for (SuperType type : kAllTypes) {
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(name(type));
        std::set<Tuple> brute;
        std::map<Tuple, bool> any_split;  // combined multiset -> some split in zone
        for_each_tuple(n, 2 * r, [&](const Tuple& t) {
          const bool z = zone_oracle(type, t, ranks);
          if (z) brute.insert(t);
          Tuple m = t;
          std::sort(m.begin(), m.end());
          any_split[m] = any_split[m] || z;
        });

        const auto ordered = enumerate_classes(n, r, type, ranks, SideMode::Ordered);
        CHECK(std::is_sorted(ordered.begin(), ordered.end()));
        CHECK(std::adjacent_find(ordered.begin(), ordered.end()) == ordered.end());
        std::set<Tuple> covered;
        for (const auto& c : ordered) {
          for (const auto& t : expand(c)) covered.insert(t);
        }
        CHECK(covered == brute);

        const auto merged = enumerate_classes(n, r, type, ranks, SideMode::Merged);
        std::set<Tuple> covered_m;
        for (const auto& c : merged) {
          CHECK(c.left <= c.right);
          for (const auto& t : expand(c)) covered_m.insert(t);
          for (const auto& t : expand(TupleClass{c.right, c.left})) covered_m.insert(t);
        }
        CHECK(covered_m == brute);

        const auto combined = enumerate_classes(n, r, type, ranks, SideMode::Combined);
        std::set<Tuple> multisets;
        for (const auto& c : combined) CHECK(multisets.insert(c.combined()).second);
        std::set<Tuple> expected;
        for (const auto& [m, z] : any_split) {
          if (z) expected.insert(m);
        }
        CHECK(multisets == expected);
      }
    }
  }
}

TEST_CASE("product_integral examples") {
  const Family ic = indicator_complement_family(4);
  CHECK(product_integral(ic, {{0, 1}, {2, 3}}) == Scalar());
  CHECK(product_integral(ic, {{0, 0}, {1, 2}}) == Scalar(R("1/4")));

  const Family h3 = haar_grid(kUnit, 3);
  const std::size_t q = h3.index_of(DyadicInterval{-2, 0}.label());
  const std::size_t h = h3.index_of(DyadicInterval{-1, 0}.label());
  const std::size_t u = h3.index_of(kUnit.label());
  CHECK(product_integral(h3, TupleClass{{q, q}, {h, u}}.canonicalize()) == Scalar(QSqrt2::sqrt2()));
  CHECK_THROWS_AS(product_integral(ic, {{0, 9}, {1, 2}}), PreconditionError);
}

TEST_CASE("product integral matches tuple-order evaluation and sampling") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<StepFunction> fns;
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
    for (std::size_t i = 0; i < n; ++i) fns.push_back(testutil::random_step(rng, true));
    const Family fam = make_family(fns);
    const ProductEvaluator ev(fam);
    const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
    Tuple t(2 * r);
    for (auto& x : t) x = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
    const Scalar expected = testutil::sampled_tuple_integral(fam, t);
    CHECK(ev.integral_of_tuple(t) == expected);
    CHECK(ev.integral(TupleClass::from_tuple(t)) == expected);
    Tuple p = t;
    std::reverse(p.begin(), p.begin() + r);
    std::rotate(p.begin() + r, p.begin() + r + 1, p.end());
    CHECK(ev.integral_of_tuple(p) == expected);
    // Swapping the halves conjugates.
    Tuple s(t.begin() + r, t.end());
    s.insert(s.end(), t.begin(), t.begin() + r);
    CHECK(ev.integral_of_tuple(s) == conj(expected));
  }
}

TEST_CASE("classify examples") {
  const auto all = std::vector<SuperType>(kAllTypes.begin(), kAllTypes.end());

  const Family ic = indicator_complement_family(4);
  const auto rep = classify(ic, 2, all);
  CHECK(rep.verdicts.at(SuperType::IV).holds());
  CHECK(rep.verdicts.at(SuperType::II).status == TypeVerdict::Status::Fails);
  CHECK(rep.verdicts.at(SuperType::III).status == TypeVerdict::Status::Fails);
  const TupleClass w3 = *rep.verdicts.at(SuperType::III).witness;
  const Tuple comb = w3.combined();
  CHECK(std::count(comb.begin(), comb.end(), comb.back()) == 1);
  CHECK(product_integral(ic, *rep.verdicts.at(SuperType::II).witness).real().sign() > 0);
  check_witnesses(ic, rep);

  const Family h4 = haar_grid(kUnit, 4);
  const auto hr = classify(h4, 2, all);
  CHECK(hr.verdicts.at(SuperType::IV).holds());
  CHECK(hr.verdicts.at(SuperType::III).holds());
  CHECK(hr.verdicts.at(SuperType::II).status == TypeVerdict::Status::Fails);
  check_witnesses(h4, hr);
  {
    // Nested shape (I1, I1, I2, I3): one interval twice, two strictly larger ones once.
    const Tuple c = hr.verdicts.at(SuperType::II).witness->combined();
    std::map<std::size_t, int> mult;
    for (auto j : c) ++mult[j];
    REQUIRE(mult.size() == 3);
    std::map<std::string, DyadicInterval> by_label;
    for (int k = 0; k >= -3; --k) {
      for (std::int64_t p = 0; p < (std::int64_t{1} << -k); ++p) by_label[DyadicInterval{k, p}.label()] = {k, p};
    }
    std::vector<DyadicInterval> ivs;
    DyadicInterval twice{};
    for (auto [j, m] : mult) {
      ivs.push_back(by_label.at(h4.label(j)));
      if (m == 2) twice = ivs.back();
    }
    REQUIRE(ivs.size() == 3);
    std::sort(ivs.begin(), ivs.end(), [](auto& a, auto& b) { return a.k < b.k; });
    CHECK(twice == ivs[0]);
    CHECK(ivs[1].contains(ivs[0]));
    CHECK(ivs[2].contains(ivs[1]));
  }

  const Family tv = typeiv_construction({2, 6, std::vector<Rational>(6, 1)});
  CHECK(classify(tv, 2, std::vector<SuperType>{SuperType::IV}).all_hold());

  CHECK_THROWS_AS(classify(ic, 0, all), PreconditionError);
  CHECK_THROWS_AS(classify(Family(), 2, all), PreconditionError);
}

TEST_CASE("Type III is not applicable without an order") {
  const Family unordered = make_family({haar(kUnit), haar({-1, 0})}, false);
  const auto rep = classify(unordered, 1, std::vector<SuperType>{SuperType::III, SuperType::IV});
  CHECK(rep.verdicts.at(SuperType::III).status == TypeVerdict::Status::NotApplicable);
  CHECK(rep.all_hold());
}

TEST_CASE("Haar Type III depends on finer intervals ranking higher") {
  const Family h4 = haar_grid(kUnit, 4);
  std::vector<std::string> coarse_max = h4.ordering_labels();
  std::reverse(coarse_max.begin(), coarse_max.end());
  // Reversed generations: the root becomes the maximum.
  const Family flipped(h4.members(), coarse_max);
  const auto rep = classify(flipped, 2, std::vector<SuperType>{SuperType::III});
  CHECK(rep.verdicts.at(SuperType::III).status == TypeVerdict::Status::Fails);
  check_witnesses(flipped, rep);
  CHECK(classify(h4, 3, std::vector<SuperType>{SuperType::IV}).all_hold());
}

TEST_CASE("fast, reference and naive classification agree") {
  Rng rng(43);
  const auto all = std::vector<SuperType>(kAllTypes.begin(), kAllTypes.end());
  for (const Family& fam : sample_families(rng)) {
    for (unsigned r = 1; r <= 2; ++r) {
      CAPTURE(fam.size());
      CAPTURE(r);
      const auto fast = classify(fam, r, all);
      ClassifyOptions slow_opts;
      slow_opts.fast_kernel = false;
      const auto slow = classify(fam, r, all, slow_opts);
      const auto ref = classify_reference(fam, r, all);
      const auto naive = classify_naive(fam, r, all);
      CHECK(statuses(fast) == statuses(ref));
      CHECK(statuses(slow) == statuses(ref));
      CHECK(statuses(naive) == statuses(ref));
      for (const auto& [t, v] : fast.verdicts) {
        CHECK(v.witness == slow.verdicts.at(t).witness);
        CHECK(v.classes_checked == slow.verdicts.at(t).classes_checked);
      }
      check_witnesses(fam, fast);
      check_witnesses(fam, ref);
      check_witnesses(fam, naive);
      check_monotone(fast);
      check_monotone(ref);
    }
  }
}

TEST_CASE("worker count does not change reports") {
  const auto all = std::vector<SuperType>(kAllTypes.begin(), kAllTypes.end());
  const Family h4 = haar_grid(kUnit, 4);
  const Family ic = indicator_complement_family(6);
  for (const Family* fam : {&h4, &ic}) {
    ClassifyOptions one, many;
    one.threads = 1;
    many.threads = 5;
    const auto a = classify(*fam, 2, all, one);
    const auto b = classify(*fam, 2, all, many);
    for (const auto& [t, v] : a.verdicts) {
      CHECK(v.status == b.verdicts.at(t).status);
      CHECK(v.witness == b.verdicts.at(t).witness);
      CHECK(v.classes_checked == b.verdicts.at(t).classes_checked);
    }
  }
}

TEST_CASE("kernel falls back to exact arithmetic on overflow") {
  // Huge coprime denominators push the rescaled values past 64 bits.
  const Rational big = Rational(mpz_class("1000000000000000000000007"));
  std::vector<StepFunction> fns = {scale(haar(kUnit), Scalar(1 / big)), haar({-1, 0}),
                                   scale(haar({-1, 1}), Scalar(big)), haar({-2, 2}),
                                   scale(haar({-2, 0}), Scalar(Rational(1, 3) / big))};
  const Family fam = make_family(fns);
  const ProductEvaluator ev(fam);
  const auto scan = detail::scan_zone(fam, ev, 2, SuperType::IV, 1);
  CHECK(scan.exact_fallbacks > 0);
  CHECK_FALSE(scan.witness.has_value());
  const auto all = std::vector<SuperType>(kAllTypes.begin(), kAllTypes.end());
  CHECK(statuses(classify(fam, 2, all)) == statuses(classify_reference(fam, 2, all)));
}

TEST_CASE("positive scaling leaves verdicts unchanged") {
  Rng rng(44);
  const auto all = std::vector<SuperType>(kAllTypes.begin(), kAllTypes.end());
  for (const Family& fam : sample_families(rng)) {
    std::vector<Family::Member> scaled = fam.members();
    for (auto& m : scaled) m.fn = scale(m.fn, Scalar(abs(rng.nonzero_rational())));
    const Family g(scaled, fam.has_ordering() ? std::optional(fam.ordering_labels()) : std::nullopt);
    const auto a = classify(fam, 2, all);
    const auto b = classify(g, 2, all);
    CHECK(statuses(a) == statuses(b));
    for (const auto& [t, v] : a.verdicts) CHECK(v.witness == b.verdicts.at(t).witness);
  }
}

TEST_CASE("zone inclusions at |J| = 5, r = 2") {
  const auto rep = check_zone_inclusions(5, 2);
  REQUIRE(rep.inclusions.size() == 4);
  const Ranks ranks = identity_ranks(5);
  for (const auto& z : rep.inclusions) {
    CHECK(z.included);
    if (z.inner == SuperType::II) {
      // Four slots: an odd multiplicity is 1 or 3, and 3 leaves a single.
      CHECK(z.inner_count == z.outer_count);
      CHECK_FALSE(z.strictness_witness.has_value());
      continue;
    }
    CHECK(z.inner_count < z.outer_count);
    REQUIRE(z.strictness_witness.has_value());
    CHECK(zone_oracle(z.outer, *z.strictness_witness, ranks));
    CHECK_FALSE(zone_oracle(z.inner, *z.strictness_witness, ranks));
  }
  CHECK_FALSE(rep.all_strict());
  // Direct counts over 5^4 tuples.
  std::map<SuperType, std::uint64_t> counts;
  for_each_tuple(5, 4, [&](const Tuple& t) {
    for (SuperType type : kAllTypes) counts[type] += zone_oracle(type, t, ranks) ? 1 : 0;
  });
  CHECK(counts[SuperType::IV] == 120);
  CHECK(rep.inclusions[0].inner_count == counts[SuperType::IV]);
  CHECK(rep.inclusions[3].outer_count == counts[SuperType::IStar]);
}

TEST_CASE("zone inclusions are strict at r = 3") {
  const auto rep = check_zone_inclusions(5, 3);
  CHECK(rep.all_strict());
  const Ranks ranks = identity_ranks(5);
  for (const auto& z : rep.inclusions) {
    REQUIRE(z.strictness_witness.has_value());
    CHECK(zone_oracle(z.outer, *z.strictness_witness, ranks));
    CHECK_FALSE(zone_oracle(z.inner, *z.strictness_witness, ranks));
  }
}
