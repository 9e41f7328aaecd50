#include "class_kernel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace superortho::detail {

namespace {

using i128 = __int128;

// a + b sqrt 2
struct Z2 {
  i128 a = 0;
  i128 b = 0;
  bool is_zero() const { return a == 0 && b == 0; }
};

// re + i im
struct ZC {
  Z2 re;
  Z2 im;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

inline bool add(i128 x, i128 y, i128& out) { return !__builtin_add_overflow(x, y, &out); }
inline bool sub(i128 x, i128 y, i128& out) { return !__builtin_sub_overflow(x, y, &out); }
inline bool mul(i128 x, i128 y, i128& out) { return !__builtin_mul_overflow(x, y, &out); }

inline bool mul(const Z2& x, const Z2& y, Z2& out) {
  if (x.b == 0 && y.b == 0) {
    out.b = 0;
    return mul(x.a, y.a, out.a);
  }
  i128 ac, bd, ad, bc;
  if (!mul(x.a, y.a, ac) || !mul(x.b, y.b, bd) || !mul(x.a, y.b, ad) || !mul(x.b, y.a, bc)) {
    return false;
  }
  i128 bd2;
  return add(bd, bd, bd2) && add(ac, bd2, out.a) && add(ad, bc, out.b);
}

inline bool add(const Z2& x, const Z2& y, Z2& out) {
  return add(x.a, y.a, out.a) && add(x.b, y.b, out.b);
}

inline bool sub(const Z2& x, const Z2& y, Z2& out) {
  return sub(x.a, y.a, out.a) && sub(x.b, y.b, out.b);
}

template <bool Complex>
inline bool mul(const ZC& x, const ZC& y, bool conj_y, ZC& out) {
  if constexpr (!Complex) {
    out.im = {};
    return mul(x.re, y.re, out.re);
  } else {
    Z2 yi = y.im;
    if (conj_y) {
      yi.a = -yi.a;
      yi.b = -yi.b;
    }
    Z2 rr, ii, ri, ir;
    if (!mul(x.re, y.re, rr) || !mul(x.im, yi, ii) || !mul(x.re, yi, ri) || !mul(x.im, y.re, ir)) {
      return false;
    }
    return sub(rr, ii, out.re) && add(ri, ir, out.im);
  }
}

bool to_i64(const mpz_class& z, i128& out) {
  if (!z.fits_slong_p()) return false;
  out = z.get_si();
  return true;
}

mpz_class lcm_denominators(const std::vector<Scalar>& values) {
  mpz_class l = 1;
  auto fold = [&l](const Rational& q) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t()); };
  for (const auto& v : values) {
    fold(v.real().rational_part());
    fold(v.real().sqrt2_part());
    fold(v.imag().rational_part());
    fold(v.imag().sqrt2_part());
  }
  return l;
}

struct Member {
  std::vector<ZC> values;
  std::size_t lo = 0;  // first nonzero cell
  std::size_t hi = 0;  // one past the last nonzero cell
  bool fits = false;
};

struct Kernel {
  std::size_t cells = 0;
  std::vector<i128> widths;
  std::vector<Member> members;
  bool widths_fit = false;

  explicit Kernel(const CommonGrid& grid) : cells(grid.cell_count()) {
    const auto w = grid.widths();
    mpz_class wl = 1;
    for (const auto& q : w) mpz_lcm(wl.get_mpz_t(), wl.get_mpz_t(), q.get_den_mpz_t());
    widths.resize(cells);
    widths_fit = true;
    for (std::size_t c = 0; c < cells && widths_fit; ++c) {
      const Rational scaled = w[c] * Rational(wl);
      widths_fit = to_i64(scaled.get_num(), widths[c]);
    }

    members.resize(grid.values.size());
    for (std::size_t j = 0; j < grid.values.size(); ++j) {
      const auto& vals = grid.values[j];
      Member& m = members[j];
      m.values.resize(cells);
      m.fits = true;
      const Rational scale(lcm_denominators(vals));
      auto load = [&](const Rational& q, i128& out) {
        const Rational s = q * scale;
        if (!to_i64(s.get_num(), out)) m.fits = false;
      };
      m.lo = cells;
      for (std::size_t c = 0; c < cells && m.fits; ++c) {
        load(vals[c].real().rational_part(), m.values[c].re.a);
        load(vals[c].real().sqrt2_part(), m.values[c].re.b);
        load(vals[c].imag().rational_part(), m.values[c].im.a);
        load(vals[c].imag().sqrt2_part(), m.values[c].im.b);
        if (!vals[c].is_zero()) {
          m.lo = std::min(m.lo, c);
          m.hi = c + 1;
        }
      }
      if (m.lo == cells) m.lo = m.hi = 0;
    }
  }
};

struct Frame {
  std::vector<ZC> prod;
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool exact = false;  // overflow or an oversized member somewhere above
};

// Mirrors ClassWalker in classifier.cpp slot by slot so the visiting order,
// and therefore the witness, matches for_each_class.
template <bool Complex>
struct Scanner {
  const Kernel& kernel;
  const ProductEvaluator& exact;
  std::size_t n;
  unsigned r;
  SuperType t;
  const Ranks& ranks;
  SideMode mode;
  const std::atomic<std::size_t>& best;

  std::vector<std::size_t> slots;
  std::vector<unsigned> used;
  std::vector<Frame> frames;
  std::vector<std::size_t> sorted;
  TupleClass cls;

  std::size_t partition = 0;
  std::uint64_t checked = 0;
  std::uint64_t fallbacks = 0;
  bool found = false;
  bool aborted = false;

  Scanner(const Kernel& k, const ProductEvaluator& e, std::size_t n_, unsigned r_, SuperType t_,
          const Ranks& ranks_, SideMode mode_, const std::atomic<std::size_t>& best_)
      : kernel(k), exact(e), n(n_), r(r_), t(t_), ranks(ranks_), mode(mode_), best(best_),
        slots(2 * r_), used(n_), frames(2 * r_) {
    for (auto& f : frames) f.prod.resize(kernel.cells);
  }

  bool conj_slot(std::size_t p) const { return Complex && p >= r; }

  std::size_t lower_bound(std::size_t p) const {
    if (p == 0) return 0;
    if (mode != SideMode::Combined && p == r) return 0;
    return slots[p - 1] + (t == SuperType::IV ? 1 : 0);
  }

  void build_frame(std::size_t p) {
    Frame& f = frames[p];
    const Member& m = kernel.members[slots[p]];
    if (p == 0) {
      f.lo = m.lo;
      f.hi = m.hi;
      f.exact = !m.fits;
      if (!f.exact) {
        for (std::size_t c = f.lo; c < f.hi; ++c) {
          f.prod[c] = m.values[c];
          if (conj_slot(p)) {
            f.prod[c].im.a = -f.prod[c].im.a;
            f.prod[c].im.b = -f.prod[c].im.b;
          }
        }
      }
      return;
    }
    const Frame& parent = frames[p - 1];
    f.lo = std::max(parent.lo, m.lo);
    f.hi = std::min(parent.hi, m.hi);
    if (f.hi < f.lo) f.hi = f.lo;
    f.exact = parent.exact || !m.fits;
    if (f.exact) return;
    const bool cj = conj_slot(p);
    for (std::size_t c = f.lo; c < f.hi; ++c) {
      if (!mul<Complex>(parent.prod[c], m.values[c], cj, f.prod[c])) {
        f.exact = true;
        return;
      }
    }
  }

  // Returns true when the class integral is zero.
  bool leaf_is_zero() {
    const std::size_t last = 2 * r - 1;
    const Member& m = kernel.members[slots[last]];
    const Frame* parent = last == 0 ? nullptr : &frames[last - 1];
    bool need_exact = !m.fits || !kernel.widths_fit || (parent && parent->exact);
    if (!need_exact) {
      const std::size_t lo = parent ? std::max(parent->lo, m.lo) : m.lo;
      const std::size_t hi = parent ? std::min(parent->hi, m.hi) : m.hi;
      ZC acc;
      const bool cj = conj_slot(last);
      for (std::size_t c = lo; c < hi && !need_exact; ++c) {
        ZC prod;
        if (parent) {
          if (!mul<Complex>(parent->prod[c], m.values[c], cj, prod)) {
            need_exact = true;
            break;
          }
        } else {
          prod = m.values[c];
          if (cj) {
            prod.im.a = -prod.im.a;
            prod.im.b = -prod.im.b;
          }
        }
        const ZC w{{kernel.widths[c], 0}, {}};
        ZC term;
        if (!mul<Complex>(prod, w, false, term) || !add(acc.re, term.re, acc.re) ||
            !add(acc.im, term.im, acc.im)) {
          need_exact = true;
        }
      }
      if (!need_exact) return acc.is_zero();
    }
    ++fallbacks;
    cls.left.assign(slots.begin(), slots.begin() + r);
    cls.right.assign(slots.begin() + r, slots.end());
    return exact.integral(cls).is_zero();
  }

  bool in_zone_leaf() {
    cls.left.assign(slots.begin(), slots.begin() + r);
    cls.right.assign(slots.begin() + r, slots.end());
    if (mode == SideMode::Merged && cls.right < cls.left) return false;
    sorted = slots;
    if (mode != SideMode::Combined) std::sort(sorted.begin(), sorted.end());
    return zone_of_sorted(t, sorted, cls.left, cls.right, ranks);
  }

  void walk(std::size_t p) {
    if (p == 2 * r) {
      if (!in_zone_leaf()) return;
      ++checked;
      if ((checked & 0xFFF) == 0 && best.load(std::memory_order_relaxed) < partition) {
        aborted = true;
        return;
      }
      if (!leaf_is_zero()) found = true;
      return;
    }
    const std::size_t begin = p == 0 ? partition : lower_bound(p);
    const std::size_t end = p == 0 ? partition + 1 : n;
    for (std::size_t i = begin; i < end && !found && !aborted; ++i) {
      if (t == SuperType::IV && used[i] != 0) continue;
      slots[p] = i;
      ++used[i];
      if (p + 1 < 2 * r) build_frame(p);
      walk(p + 1);
      --used[i];
    }
  }

  void run(std::size_t part) {
    partition = part;
    checked = 0;
    found = false;
    aborted = false;
    walk(0);
  }
};

struct PartitionResult {
  std::uint64_t checked = 0;
  std::vector<std::size_t> witness;
  bool found = false;
};

template <bool Complex>
ScanResult scan(const Kernel& kernel, const ProductEvaluator& exact, const Family& fam, unsigned r,
                SuperType t, unsigned threads) {
  const std::size_t n = fam.size();
  const SideMode mode = Complex ? SideMode::Merged : SideMode::Combined;
  std::vector<PartitionResult> results(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::atomic<std::uint64_t> fallbacks{0};

  auto worker = [&] {
    Scanner<Complex> s(kernel, exact, n, r, t, fam.ranks(), mode, best);
    while (true) {
      const std::size_t part = next.fetch_add(1);
      if (part >= n) break;
      if (part > best.load()) continue;
      s.run(part);
      if (s.aborted) continue;
      results[part].checked = s.checked;
      if (s.found) {
        results[part].found = true;
        results[part].witness = s.slots;
        std::size_t cur = best.load();
        while (part < cur && !best.compare_exchange_weak(cur, part)) {
        }
      }
    }
    fallbacks += s.fallbacks;
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ScanResult out;
  out.exact_fallbacks = fallbacks.load();
  const std::size_t w = best.load();
  for (std::size_t p = 0; p < n && p <= w; ++p) out.checked += results[p].checked;
  if (w < n) out.witness = results[w].witness;
  return out;
}

}  // namespace

ScanResult scan_zone(const Family& fam, const ProductEvaluator& exact, unsigned r, SuperType t,
                     unsigned threads) {
  const Kernel kernel(exact.grid());
  if (fam.is_real()) return scan<false>(kernel, exact, fam, r, t, threads);
  return scan<true>(kernel, exact, fam, r, t, threads);
}

}  // namespace superortho::detail
