#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cutfn/rational.hpp"

namespace cutfn {

struct Interval {
  Rational lo, hi;
  Rational length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class PieceSign { Positive, Negative };

// Construction bookkeeping for one piece: slope sign plus the step at which
// the piece first appeared.
struct SegmentTag {
  PieceSign sign = PieceSign::Positive;
  std::uint32_t index = 0;
  friend bool operator==(const SegmentTag&, const SegmentTag&) = default;
};

// Continuous piecewise linear function on [0, 1], evaluated 1-periodically.
//
// Invariants enforced on construction: breakpoints strictly increasing with
// b_0 = 0 and b_n = 1, one value per breakpoint, v_0 = v_n (so the periodic
// extension is well defined), and tags either absent or one per piece.
class PwlFunction {
 public:
  PwlFunction(std::vector<Rational> breakpoints, std::vector<Rational> values,
              std::vector<SegmentTag> tags = {});

  std::size_t piece_count() const { return breakpoints_.size() - 1; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& values() const { return values_; }
  bool has_tags() const { return !tags_.empty(); }
  const std::vector<SegmentTag>& tags() const { return tags_; }

  // f(x mod 1), exact.
  Rational eval(const Rational& x) const;

  // Slope of piece k = [b_k, b_{k+1}].
  Rational piece_slope(std::size_t k) const;
  // Per-piece (interval, slope); adjacent equal slopes are not merged here.
  std::vector<std::pair<Interval, Rational>> slopes() const;
  // Sorted unique slope values.
  std::vector<Rational> distinct_slopes() const;

  // Merges consecutive pieces of equal slope. Tags survive when every merge
  // joins identically tagged pieces and are dropped wholesale otherwise.
  PwlFunction normalized() const;

  friend bool operator==(const PwlFunction& a, const PwlFunction& b) {
    return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
  }

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
  std::vector<SegmentTag> tags_;
};

// Pointwise f + g on the merged breakpoint grid.
PwlFunction add(const PwlFunction& f, const PwlFunction& g);

// Lazy view of x -> c * f(b * x). Keeps exact breakpoint queries available
// without materializing the composed function.
class ScaledFunction {
 public:
  ScaledFunction(PwlFunction base, Rational c, Rational b);

  const PwlFunction& base() const { return base_; }
  const Rational& value_factor() const { return c_; }
  const Rational& argument_factor() const { return b_; }

  Rational eval(const Rational& x) const;

  // All x in [lo, hi] with b*x congruent to a breakpoint of f mod 1, sorted
  // ascending without duplicates.
  std::vector<Rational> breakpoints_in(const Rational& lo,
                                       const Rational& hi) const;

 private:
  PwlFunction base_;
  Rational c_, b_;
};

ScaledFunction scale(PwlFunction f, const Rational& c, const Rational& b);

// Maximum of |f - g| over the union of the two breakpoint grids. f - g is
// piecewise linear with breakpoints inside that union, so this equals the
// sup-norm distance exactly.
Rational sup_diff_at_breakpoints(const PwlFunction& f, const PwlFunction& g);

}  // namespace cutfn
