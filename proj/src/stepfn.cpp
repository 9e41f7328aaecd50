#include "superortho/stepfn.hpp"

#include <algorithm>
#include <unordered_set>

#include "superortho/error.hpp"

namespace superortho {

StepFunction::StepFunction(std::vector<Rational> breakpoints, std::vector<Scalar> values) {
  if (values.empty()) {
    if (breakpoints.size() > 1) {
      throw PreconditionError("step function: breakpoints given without values");
    }
    return;
  }
  if (breakpoints.size() != values.size() + 1) {
    throw PreconditionError("step function: need exactly one more breakpoint than values");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw PreconditionError("step function: breakpoints must be strictly increasing");
    }
  }

  // Trim zero pieces at both ends, then merge equal neighbours.
  std::size_t first = 0;
  std::size_t last = values.size();
  while (first < last && values[first].is_zero()) ++first;
  while (last > first && values[last - 1].is_zero()) --last;
  if (first == last) return;

  breakpoints_.push_back(std::move(breakpoints[first]));
  values_.push_back(std::move(values[first]));
  for (std::size_t i = first + 1; i < last; ++i) {
    if (values[i] == values_.back()) continue;
    breakpoints_.push_back(std::move(breakpoints[i]));
    values_.push_back(std::move(values[i]));
  }
  breakpoints_.push_back(std::move(breakpoints[last]));
}

StepFunction StepFunction::constant(const Rational& lo, const Rational& hi, const Scalar& c) {
  if (!(lo < hi)) throw PreconditionError("step function: empty interval");
  return StepFunction({lo, hi}, {c});
}

bool StepFunction::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& v) { return v.is_real(); });
}

Scalar StepFunction::operator()(const Rational& x) const {
  if (values_.empty() || x < breakpoints_.front() || !(x < breakpoints_.back())) return Scalar();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

std::vector<Rational> CommonGrid::widths() const {
  std::vector<Rational> w;
  w.reserve(cell_count());
  for (std::size_t c = 0; c + 1 < breakpoints.size(); ++c) {
    w.emplace_back(breakpoints[c + 1] - breakpoints[c]);
  }
  return w;
}

StepFunction CommonGrid::function(std::size_t f) const {
  if (cell_count() == 0) return StepFunction();
  return StepFunction(breakpoints, values.at(f));
}

CommonGrid common_grid(std::span<const StepFunction> fns) {
  CommonGrid grid;
  for (const auto& f : fns) {
    std::vector<Rational> merged;
    merged.reserve(grid.breakpoints.size() + f.breakpoints().size());
    std::set_union(grid.breakpoints.begin(), grid.breakpoints.end(), f.breakpoints().begin(),
                   f.breakpoints().end(), std::back_inserter(merged));
    grid.breakpoints = std::move(merged);
  }

  const std::size_t cells = grid.cell_count();
  grid.values.reserve(fns.size());
  for (const auto& f : fns) {
    std::vector<Scalar> v(cells);
    if (!f.is_zero()) {
      // Both breakpoint lists are sorted; walk them together.
      const auto& bp = f.breakpoints();
      std::size_t piece = 0;
      for (std::size_t c = 0; c < cells; ++c) {
        const Rational& x = grid.breakpoints[c];
        if (x < bp.front()) continue;
        if (!(x < bp.back())) break;
        while (!(x < bp[piece + 1])) ++piece;
        v[c] = f.values()[piece];
      }
    }
    grid.values.push_back(std::move(v));
  }
  return grid;
}

CommonGrid refine(const StepFunction& f, const StepFunction& g) {
  const StepFunction fns[] = {f, g};
  return common_grid(fns);
}

namespace {

template <typename Op>
StepFunction pointwise(const StepFunction& f, const StepFunction& g, Op op) {
  CommonGrid grid = refine(f, g);
  std::vector<Scalar> out;
  out.reserve(grid.cell_count());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    out.push_back(op(grid.values[0][c], grid.values[1][c]));
  }
  if (out.empty()) return StepFunction();
  return StepFunction(std::move(grid.breakpoints), std::move(out));
}

template <typename Op>
StepFunction map_values(const StepFunction& f, Op op) {
  if (f.is_zero()) return f;
  std::vector<Scalar> out;
  out.reserve(f.piece_count());
  for (const auto& v : f.values()) out.push_back(op(v));
  return StepFunction(f.breakpoints(), std::move(out));
}

}  // namespace

StepFunction add(const StepFunction& f, const StepFunction& g) {
  return pointwise(f, g, [](const Scalar& x, const Scalar& y) { return x + y; });
}

StepFunction sub(const StepFunction& f, const StepFunction& g) {
  return pointwise(f, g, [](const Scalar& x, const Scalar& y) { return x - y; });
}

StepFunction mul(const StepFunction& f, const StepFunction& g) {
  return pointwise(f, g, [](const Scalar& x, const Scalar& y) { return x * y; });
}

StepFunction scale(const StepFunction& f, const Scalar& c) {
  return map_values(f, [&c](const Scalar& v) { return v * c; });
}

StepFunction conj(const StepFunction& f) {
  return map_values(f, [](const Scalar& v) { return v.conj(); });
}

StepFunction abs_squared(const StepFunction& f) {
  return map_values(f, [](const Scalar& v) { return Scalar(v.modulus_squared()); });
}

Scalar integral(const StepFunction& f) {
  Scalar total;
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    total += f.values()[i] * QSqrt2(Rational(bp[i + 1] - bp[i]));
  }
  return total;
}

QSqrt2 lp_power(const StepFunction& f, unsigned p) {
  if (p < 2 || p % 2 != 0) throw PreconditionError("lp_power: p must be an even integer >= 2");
  QSqrt2 total;
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    total += pow(f.values()[i].modulus_squared(), p / 2) * Rational(bp[i + 1] - bp[i]);
  }
  return total;
}

Family::Family(std::vector<Member> members, std::optional<std::vector<std::string>> ordering)
    : members_(std::move(members)) {
  std::unordered_set<std::string> seen;
  for (const auto& m : members_) {
    if (!seen.insert(m.label).second) {
      throw PreconditionError("family: duplicate label '" + m.label + "'");
    }
    real_ = real_ && m.fn.is_real();
  }
  if (ordering) {
    if (ordering->size() != members_.size()) {
      throw PreconditionError("family: ordering must list every label exactly once");
    }
    std::vector<std::size_t> ranks(members_.size(), members_.size());
    for (std::size_t pos = 0; pos < ordering->size(); ++pos) {
      const std::size_t i = index_of((*ordering)[pos]);
      if (ranks[i] != members_.size()) {
        throw PreconditionError("family: ordering repeats label '" + (*ordering)[pos] + "'");
      }
      ranks[i] = pos;
    }
    ranks_ = std::move(ranks);
  }
}

std::size_t Family::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].label == label) return i;
  }
  throw PreconditionError("family: unknown label '" + label + "'");
}

std::vector<std::string> Family::ordering_labels() const {
  if (!ranks_) return {};
  std::vector<std::string> out(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) out[(*ranks_)[i]] = members_[i].label;
  return out;
}

std::vector<StepFunction> Family::functions() const {
  std::vector<StepFunction> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.fn);
  return out;
}

StepFunction Family::sum() const {
  const auto fns = functions();
  const CommonGrid grid = common_grid(fns);
  if (grid.cell_count() == 0) return StepFunction();
  std::vector<Scalar> total(grid.cell_count());
  for (const auto& row : grid.values) {
    for (std::size_t c = 0; c < row.size(); ++c) total[c] += row[c];
  }
  return StepFunction(grid.breakpoints, std::move(total));
}

std::vector<std::string> natural_ordering(const std::vector<Family::Member>& members) {
  std::vector<std::pair<mpz_class, std::string>> keyed;
  keyed.reserve(members.size());
  for (const auto& m : members) {
    const Rational q = [&] {
      try {
        return parse_rational(m.label);
      } catch (const ParseError&) {
        throw PreconditionError("natural ordering needs integer labels, got '" + m.label + "'");
      }
    }();
    if (q.get_den() != 1 || m.label.find('/') != std::string::npos) {
      throw PreconditionError("natural ordering needs integer labels, got '" + m.label + "'");
    }
    keyed.emplace_back(q.get_num(), m.label);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::string> out;
  out.reserve(keyed.size());
  for (auto& [key, label] : keyed) out.push_back(std::move(label));
  return out;
}

QSqrt2 square_function_power(const Family& fam, unsigned r) {
  if (fam.empty()) throw PreconditionError("square_function_power: empty family");
  if (r == 0) throw PreconditionError("square_function_power: r must be positive");
  const auto fns = fam.functions();
  const CommonGrid grid = common_grid(fns);
  const auto widths = grid.widths();
  QSqrt2 total;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    QSqrt2 sq;
    for (const auto& row : grid.values) sq += row[c].modulus_squared();
    total += pow(sq, r) * widths[c];
  }
  return total;
}

}  // namespace superortho
