#include "cutfn/pwl.hpp"

#include <algorithm>

#include "cutfn/error.hpp"

namespace cutfn {

PwlFunction::PwlFunction(std::vector<Rational> breakpoints,
                         std::vector<Rational> values,
                         std::vector<SegmentTag> tags)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      tags_(std::move(tags)) {
  if (breakpoints_.size() < 2)
    throw Error("piecewise linear function needs at least two breakpoints");
  if (values_.size() != breakpoints_.size())
    throw Error("breakpoint and value lists differ in length");
  if (!breakpoints_.front().is_zero())
    throw Error("first breakpoint must be 0, got " +
                breakpoints_.front().str());
  if (breakpoints_.back() != Rational(1))
    throw Error("last breakpoint must be 1, got " + breakpoints_.back().str());
  for (std::size_t k = 1; k < breakpoints_.size(); ++k)
    if (!(breakpoints_[k - 1] < breakpoints_[k]))
      throw Error("breakpoints must increase strictly; offending pair " +
                  breakpoints_[k - 1].str() + ", " + breakpoints_[k].str());
  if (values_.front() != values_.back())
    throw Error("periodicity requires equal first and last values, got " +
                values_.front().str() + " and " + values_.back().str());
  if (!tags_.empty() && tags_.size() != piece_count())
    throw Error("tag list must have one entry per piece");
}

Rational PwlFunction::eval(const Rational& x) const {
  Rational t = x.mod1();
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin());
  const Rational& a = breakpoints_[j - 1];
  if (t == a) return values_[j - 1];
  const Rational& b = breakpoints_[j];
  return values_[j - 1] + (values_[j] - values_[j - 1]) * (t - a) / (b - a);
}

Rational PwlFunction::piece_slope(std::size_t k) const {
  if (k >= piece_count()) throw Error("piece index out of range");
  return (values_[k + 1] - values_[k]) /
         (breakpoints_[k + 1] - breakpoints_[k]);
}

std::vector<std::pair<Interval, Rational>> PwlFunction::slopes() const {
  std::vector<std::pair<Interval, Rational>> out;
  out.reserve(piece_count());
  for (std::size_t k = 0; k < piece_count(); ++k)
    out.push_back({Interval{breakpoints_[k], breakpoints_[k + 1]},
                   piece_slope(k)});
  return out;
}

std::vector<Rational> PwlFunction::distinct_slopes() const {
  std::vector<Rational> s;
  s.reserve(piece_count());
  for (std::size_t k = 0; k < piece_count(); ++k) s.push_back(piece_slope(k));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

PwlFunction PwlFunction::normalized() const {
  std::vector<Rational> sl(piece_count());
  for (std::size_t k = 0; k < piece_count(); ++k) sl[k] = piece_slope(k);

  std::vector<Rational> nb{breakpoints_.front()}, nv{values_.front()};
  std::vector<SegmentTag> nt;
  bool tags_ok = has_tags();
  std::size_t k = 0;
  while (k < piece_count()) {
    std::size_t j = k + 1;
    while (j < piece_count() && sl[j] == sl[k]) ++j;
    if (tags_ok)
      for (std::size_t t = k + 1; t < j && tags_ok; ++t)
        tags_ok = tags_[t] == tags_[k];
    if (tags_ok) nt.push_back(tags_[k]);
    nb.push_back(breakpoints_[j]);
    nv.push_back(values_[j]);
    k = j;
  }
  return PwlFunction(std::move(nb), std::move(nv),
                     tags_ok ? std::move(nt) : std::vector<SegmentTag>{});
}

PwlFunction add(const PwlFunction& f, const PwlFunction& g) {
  std::vector<Rational> grid;
  grid.reserve(f.breakpoints().size() + g.breakpoints().size());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(),
             g.breakpoints().begin(), g.breakpoints().end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Rational> vals;
  vals.reserve(grid.size());
  for (const Rational& b : grid) vals.push_back(f.eval(b) + g.eval(b));
  // eval works mod 1, so the value recorded at b = 1 equals the one at 0.
  return PwlFunction(std::move(grid), std::move(vals));
}

ScaledFunction::ScaledFunction(PwlFunction base, Rational c, Rational b)
    : base_(std::move(base)), c_(std::move(c)), b_(std::move(b)) {
  if (b_.is_zero()) throw Error("argument factor of scale must be nonzero");
}

Rational ScaledFunction::eval(const Rational& x) const {
  return c_ * base_.eval(b_ * x);
}

std::vector<Rational> ScaledFunction::breakpoints_in(const Rational& lo,
                                                     const Rational& hi) const {
  if (hi < lo) throw Error("breakpoints_in needs lo <= hi");
  auto ceil_of = [](const Rational& r) -> mpz_class { return -((-r).floor()); };

  std::vector<Rational> out;
  const auto& bps = base_.breakpoints();
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    // Solve b*x = bps[i] + k over integers k with x in [lo, hi].
    Rational blo = b_ * lo - bps[i], bhi = b_ * hi - bps[i];
    if (bhi < blo) std::swap(blo, bhi);
    mpz_class k = ceil_of(blo), kmax = bhi.floor();
    for (; k <= kmax; ++k)
      out.push_back((bps[i] + Rational(mpq_class(k))) / b_);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ScaledFunction scale(PwlFunction f, const Rational& c, const Rational& b) {
  return ScaledFunction(std::move(f), c, b);
}

Rational sup_diff_at_breakpoints(const PwlFunction& f, const PwlFunction& g) {
  Rational best;
  for (const Rational& b : f.breakpoints())
    best = max(best, (f.eval(b) - g.eval(b)).abs());
  for (const Rational& b : g.breakpoints())
    best = max(best, (f.eval(b) - g.eval(b)).abs());
  return best;
}

}  // namespace cutfn
