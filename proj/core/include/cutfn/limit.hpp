#pragma once

#include <cstddef>
#include <vector>

#include "cutfn/construct.hpp"
#include "cutfn/report.hpp"

namespace cutfn {

// Closed-form limit data for schedules with a geometric tail.
struct LimitParams {
  Rational gamma;  // lim gamma_i = alpha - full weighted tail sum
  Rational c;      // sup |psi - psi_d| <= c / 2^(d-1) for every depth d
};

Rational gamma_limit(const EpsilonSchedule& schedule);
Rational convergence_constant(const EpsilonSchedule& schedule);
LimitParams limit_params(const EpsilonSchedule& schedule);

// Where x sits after descending `depth` construction steps around it:
// either inside the closure of a persistent negative segment (negative,
// index = the step that created it) or inside a still-positive interval of
// psi_depth (positive, index = depth). Negative segments never change after
// creation, so a negative answer is final for every later depth.
struct SegmentLocation {
  bool negative = false;
  Interval interval;
  std::size_t index = 0;
};

SegmentLocation locate(const EpsilonSchedule& schedule, const Rational& x,
                       std::size_t max_depth);

// psi_depth(x) by localized descent: tracks only the positive interval
// around x, so the cost is O(depth) instead of O(2^depth). Agrees exactly
// with eval(build(schedule, depth), x).
Rational psi_value_at(const EpsilonSchedule& schedule, const Rational& x,
                      std::size_t depth);

// Limit function evaluation. Exact when x lands in a persistent negative
// segment (the limit equals the finite-depth value there); otherwise an
// enclosure [psi_d(x) - r, psi_d(x) + r] with r = c / 2^(d-1) <= tol,
// clipped to [0, 1]. Refining tol keeps enclosures nested.
struct LimitEvaluation {
  enum class Mode { Exact, Enclosure };
  Mode mode = Mode::Exact;
  Rational point;
  std::size_t depth = 0;
  // Exact fields.
  Rational value;
  std::size_t segment_index = 0;
  // Enclosure fields.
  Rational lower, upper;
};

LimitEvaluation eval_limit(const EpsilonSchedule& schedule, const Rational& x,
                           const Rational& tol);

struct NegativeSegment {
  Interval interval;
  std::size_t index = 0;
};

// Full-construction operations refuse depths beyond this unless the caller
// raises the policy explicitly (2^20 pieces is about the memory comfort
// line).
inline constexpr std::size_t kDefaultDepthPolicy = 20;

// The negative segments of psi_depth sorted by left endpoint, each with its
// creation index. There are exactly 2^depth of them.
std::vector<NegativeSegment> negative_segments(
    const EpsilonSchedule& schedule, std::size_t depth,
    std::size_t depth_policy = kDefaultDepthPolicy);

// Largest gap between consecutive negative segments of psi_depth (equals the
// common positive piece length gamma_depth / 2^depth).
Rational density_gap(const EpsilonSchedule& schedule, std::size_t depth,
                     std::size_t depth_policy = kDefaultDepthPolicy);

// Evidence that the limit is not piecewise linear: negative segment counts
// double with depth while every neighborhood of 0 keeps catching new
// segments; for each k <= depth exhibits a segment inside ]0, 2^-k[.
VerificationReport non_pwl_evidence(const EpsilonSchedule& schedule,
                                    std::size_t depth,
                                    std::size_t depth_policy =
                                        kDefaultDepthPolicy);

// Finite-depth facet evidence at the given depth:
//  (a) per negative segment ]a,b[, Delta psi vanishes identically on
//      U x V with U = [(a+b)/2, b], V = [1-(b-a)/2, 1] (checked at the
//      corners and center of each cell, enough for an affine function);
//  (b) midpoint additivity relations tying each index-(k+1) segment to a
//      segment of index <= k;
//  (c) per probe point, a chain of additivity witnesses y_n + z_n = probe
//      with 0 < z_n < 1/n and psi(y_n) + psi(z_n) >= psi(probe), the bound
//      certified against an enclosure and nonincreasing in n.
// Probes default to {1/3, 2/3, 1/7}. Requires a schedule with a tail.
VerificationReport facet_evidence(const EpsilonSchedule& schedule,
                                  std::size_t depth,
                                  std::vector<Rational> probes = {},
                                  std::size_t depth_policy =
                                      kDefaultDepthPolicy);

}  // namespace cutfn
