#include "superortho/classifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "class_kernel.hpp"
#include "superortho/error.hpp"

namespace superortho {

std::string_view name(SuperType t) {
  switch (t) {
    case SuperType::IStar: return "I*";
    case SuperType::I: return "I";
    case SuperType::II: return "II";
    case SuperType::III: return "III";
    case SuperType::IV: return "IV";
  }
  return "?";
}

SuperType parse_super_type(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "I*" || text == "IStar") return SuperType::IStar;
  if (text == "I") return SuperType::I;
  if (text == "II") return SuperType::II;
  if (text == "III") return SuperType::III;
  if (text == "IV") return SuperType::IV;
  throw ParseError("unknown superorthogonality type '" + std::string(text) + "'");
}

std::vector<SuperType> parse_super_types(std::string_view text) {
  std::vector<SuperType> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const SuperType t = parse_super_type(item);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ParseError("empty type list");
  return out;
}

TupleClass& TupleClass::canonicalize() {
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  return *this;
}

TupleClass TupleClass::from_tuple(std::span<const std::size_t> tuple) {
  if (tuple.size() % 2 != 0) throw PreconditionError("tuple length must be even");
  const std::size_t r = tuple.size() / 2;
  TupleClass cls{{tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(r)},
                 {tuple.begin() + static_cast<std::ptrdiff_t>(r), tuple.end()}};
  cls.canonicalize();
  return cls;
}

std::vector<std::size_t> TupleClass::combined() const {
  std::vector<std::size_t> all(left);
  all.insert(all.end(), right.begin(), right.end());
  std::sort(all.begin(), all.end());
  return all;
}

namespace detail {

bool zone_of_sorted(SuperType t, std::span<const std::size_t> all,
                    std::span<const std::size_t> left, std::span<const std::size_t> right,
                    const Ranks& ranks) {
  switch (t) {
    case SuperType::IStar:
      return !std::equal(left.begin(), left.end(), right.begin(), right.end());
    case SuperType::IV:
      return std::adjacent_find(all.begin(), all.end()) == all.end();
    case SuperType::III: {
      if (!ranks) throw PreconditionError("Type III needs a total order on the labels");
      std::size_t best = all.front();
      for (std::size_t x : all) {
        if ((*ranks)[x] > (*ranks)[best]) best = x;
      }
      return std::count(all.begin(), all.end(), best) == 1;
    }
    case SuperType::II:
    case SuperType::I: {
      for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        const std::size_t mult = j - i;
        if (t == SuperType::II ? mult == 1 : mult % 2 == 1) return true;
        i = j;
      }
      return false;
    }
  }
  return false;
}

}  // namespace detail

bool in_zone(SuperType t, const TupleClass& cls, const Ranks& ranks) {
  TupleClass c = cls;
  c.canonicalize();
  const auto all = c.combined();
  if (all.empty()) return false;
  return detail::zone_of_sorted(t, all, c.left, c.right, ranks);
}

namespace {

struct ClassWalker {
  std::size_t n;
  unsigned r;
  SuperType t;
  const Ranks& ranks;
  SideMode mode;
  const std::function<bool(const TupleClass&)>& visit;

  std::vector<std::size_t> slots;
  std::vector<unsigned> used;
  std::vector<std::size_t> sorted;
  TupleClass cls;
  bool stopped = false;

  std::size_t lower_bound(std::size_t p) const {
    if (p == 0) return 0;
    if (mode != SideMode::Combined && p == r) return 0;
    return slots[p - 1] + (t == SuperType::IV ? 1 : 0);
  }

  void leaf() {
    cls.left.assign(slots.begin(), slots.begin() + r);
    cls.right.assign(slots.begin() + r, slots.end());
    if (mode == SideMode::Merged && cls.right < cls.left) return;
    sorted = slots;
    if (mode != SideMode::Combined) std::sort(sorted.begin(), sorted.end());
    if (!detail::zone_of_sorted(t, sorted, cls.left, cls.right, ranks)) return;
    if (!visit(cls)) stopped = true;
  }

  void walk(std::size_t p) {
    if (p == 2 * r) {
      leaf();
      return;
    }
    for (std::size_t i = lower_bound(p); i < n && !stopped; ++i) {
      if (t == SuperType::IV && used[i] != 0) continue;
      slots[p] = i;
      ++used[i];
      walk(p + 1);
      --used[i];
    }
  }
};

}  // namespace

void for_each_class(std::size_t n, unsigned r, SuperType t, const Ranks& ranks, SideMode mode,
                    const std::function<bool(const TupleClass&)>& visit) {
  if (r == 0) throw PreconditionError("r must be positive");
  if (t == SuperType::III && !ranks) {
    throw PreconditionError("Type III needs a total order on the labels");
  }
  if (ranks && ranks->size() != n) throw PreconditionError("ranks size does not match n");
  ClassWalker w{n, r, t, ranks, mode, visit, std::vector<std::size_t>(2 * r),
                std::vector<unsigned>(n), {}, {}, false};
  w.walk(0);
}

std::vector<TupleClass> enumerate_classes(std::size_t n, unsigned r, SuperType t,
                                          const Ranks& ranks, SideMode mode) {
  std::vector<TupleClass> out;
  for_each_class(n, r, t, ranks, mode, [&](const TupleClass& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

ProductEvaluator::ProductEvaluator(const Family& fam) {
  const auto fns = fam.functions();
  grid_ = common_grid(fns);
  widths_ = grid_.widths();
}

Scalar ProductEvaluator::integral(const TupleClass& cls) const {
  std::vector<std::size_t> tuple(cls.left);
  tuple.insert(tuple.end(), cls.right.begin(), cls.right.end());
  if (cls.left.size() != cls.right.size()) throw PreconditionError("class halves differ in size");
  return integral_of_tuple(tuple);
}

Scalar ProductEvaluator::integral_of_tuple(std::span<const std::size_t> tuple) const {
  if (tuple.size() % 2 != 0) throw PreconditionError("tuple length must be even");
  for (auto i : tuple) {
    if (i >= grid_.values.size()) throw PreconditionError("class refers to a missing member");
  }
  // Slots [0, r) enter as f_j, slots [r, 2r) as conj(f_j), in slot order.
  const std::size_t r = tuple.size() / 2;
  Scalar total;
  for (std::size_t c = 0; c < grid_.cell_count(); ++c) {
    Scalar prod(1);
    bool zero = false;
    for (std::size_t p = 0; p < tuple.size(); ++p) {
      const Scalar& v = grid_.values[tuple[p]][c];
      if (v.is_zero()) {
        zero = true;
        break;
      }
      prod *= p < r ? v : v.conj();
    }
    if (zero) continue;
    total += prod * QSqrt2(widths_[c]);
  }
  return total;
}

Scalar product_integral(const Family& fam, const TupleClass& cls) {
  return ProductEvaluator(fam).integral(cls);
}

bool ClassificationReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) {
    return kv.second.status != TypeVerdict::Status::Fails;
  });
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("SUPERORTHO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

TypeVerdict not_applicable() {
  TypeVerdict v;
  v.status = TypeVerdict::Status::NotApplicable;
  v.note = "Type III needs a total order on the labels";
  return v;
}

void attach_witness(TypeVerdict& v, const ProductEvaluator& exact, TupleClass cls) {
  cls.canonicalize();
  Scalar value = exact.integral(cls);
  if (value.is_zero()) throw std::logic_error("witness class integrates to zero");
  v.status = TypeVerdict::Status::Fails;
  v.witness = std::move(cls);
  v.witness_integral = std::move(value);
}

}  // namespace

ClassificationReport classify(const Family& fam, unsigned r, std::span<const SuperType> types,
                              const ClassifyOptions& options) {
  if (r == 0) throw PreconditionError("r must be positive");
  if (fam.empty()) throw PreconditionError("cannot classify an empty family");
  ClassificationReport report;
  report.r = r;
  const ProductEvaluator exact(fam);
  const unsigned threads = resolve_thread_count(options.threads);
  const SideMode mode = fam.is_real() ? SideMode::Combined : SideMode::Merged;
  for (SuperType t : types) {
    if (t == SuperType::III && !fam.has_ordering()) {
      report.verdicts[t] = not_applicable();
      continue;
    }
    TypeVerdict v;
    if (options.fast_kernel) {
      const auto scan = detail::scan_zone(fam, exact, r, t, threads);
      v.classes_checked = scan.checked;
      if (scan.witness) {
        const auto& w = *scan.witness;
        attach_witness(v, exact,
                       TupleClass{{w.begin(), w.begin() + r}, {w.begin() + r, w.end()}});
      }
    } else {
      std::optional<TupleClass> witness;
      for_each_class(fam.size(), r, t, fam.ranks(), mode, [&](const TupleClass& cls) {
        ++v.classes_checked;
        if (exact.integral(cls).is_zero()) return true;
        witness = cls;
        return false;
      });
      if (witness) attach_witness(v, exact, *witness);
    }
    report.verdicts[t] = std::move(v);
  }
  return report;
}

ClassificationReport classify_reference(const Family& fam, unsigned r,
                                        std::span<const SuperType> types) {
  if (r == 0) throw PreconditionError("r must be positive");
  ClassificationReport report;
  report.r = r;
  const ProductEvaluator exact(fam);
  for (SuperType t : types) {
    if (t == SuperType::III && !fam.has_ordering()) {
      report.verdicts[t] = not_applicable();
      continue;
    }
    TypeVerdict v;
    std::optional<TupleClass> witness;
    for_each_class(fam.size(), r, t, fam.ranks(), SideMode::Ordered, [&](const TupleClass& cls) {
      ++v.classes_checked;
      if (exact.integral(cls).is_zero()) return true;
      witness = cls;
      return false;
    });
    if (witness) attach_witness(v, exact, *witness);
    report.verdicts[t] = std::move(v);
  }
  return report;
}

namespace {

// Advances a base-n odometer; returns false after the last tuple.
bool next_tuple(std::vector<std::size_t>& tuple, std::size_t n) {
  for (std::size_t p = tuple.size(); p-- > 0;) {
    if (++tuple[p] < n) return true;
    tuple[p] = 0;
  }
  return false;
}

}  // namespace

ClassificationReport classify_naive(const Family& fam, unsigned r,
                                    std::span<const SuperType> types) {
  if (r == 0) throw PreconditionError("r must be positive");
  ClassificationReport report;
  report.r = r;
  const ProductEvaluator exact(fam);
  const std::size_t n = fam.size();
  for (SuperType t : types) {
    if (t == SuperType::III && !fam.has_ordering()) {
      report.verdicts[t] = not_applicable();
      continue;
    }
    TypeVerdict v;
    std::vector<std::size_t> tuple(2 * r, 0);
    if (n > 0) {
      do {
        const TupleClass cls = TupleClass::from_tuple(tuple);
        if (!in_zone(t, cls, fam.ranks())) continue;
        ++v.classes_checked;
        if (!exact.integral_of_tuple(tuple).is_zero()) {
          attach_witness(v, exact, cls);
          break;
        }
      } while (next_tuple(tuple, n));
    }
    report.verdicts[t] = std::move(v);
  }
  return report;
}

bool ZoneInclusionReport::all_strict() const {
  return !inclusions.empty() && std::all_of(inclusions.begin(), inclusions.end(), [](const auto& z) {
    return z.included && z.strictness_witness.has_value();
  });
}

ZoneInclusionReport check_zone_inclusions(std::size_t n, unsigned r) {
  if (r == 0 || n == 0) throw PreconditionError("need n >= 1 and r >= 1");
  ZoneInclusionReport report;
  report.n = n;
  report.r = r;
  const std::array<std::pair<SuperType, SuperType>, 4> chain = {
      std::pair{SuperType::IV, SuperType::III}, std::pair{SuperType::III, SuperType::II},
      std::pair{SuperType::II, SuperType::I}, std::pair{SuperType::I, SuperType::IStar}};
  for (const auto& [inner, outer] : chain) {
    report.inclusions.push_back({inner, outer, 0, 0, true, std::nullopt});
  }
  Ranks ranks{std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) (*ranks)[i] = i;

  std::vector<std::size_t> tuple(2 * r, 0);
  do {
    const TupleClass cls = TupleClass::from_tuple(tuple);
    for (auto& z : report.inclusions) {
      const bool in_inner = in_zone(z.inner, cls, ranks);
      const bool in_outer = in_zone(z.outer, cls, ranks);
      z.inner_count += in_inner ? 1 : 0;
      z.outer_count += in_outer ? 1 : 0;
      if (in_inner && !in_outer) z.included = false;
      if (in_outer && !in_inner && !z.strictness_witness) z.strictness_witness = tuple;
    }
  } while (next_tuple(tuple, n));
  return report;
}

std::vector<std::string> labels_of(const Family& fam, std::span<const std::size_t> members) {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (auto i : members) out.push_back(fam.label(i));
  return out;
}

}  // namespace superortho
