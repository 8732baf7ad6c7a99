#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cutfn/pwl.hpp"
#include "cutfn/report.hpp"

namespace cutfn {

struct CheckOptions {
  // Most witnesses kept per report; exact counts are still reported.
  std::size_t witness_cap = 64;
  // Worker threads for the vertex scan; 0 picks the hardware default.
  // Verdicts, minima, counts and witness lists never depend on this.
  unsigned threads = 0;
  // Force the arbitrary-precision scan path (testing hook).
  bool force_generic = false;
};

// Delta f(x, y) = f(x) + f(y) - f(x + y), every argument taken mod 1.
Rational delta(const PwlFunction& f, const Rational& x, const Rational& y);

// Vertices of the additivity complex on the torus: the complex is cut by the
// lines x in B, y in B, x+y in B (B = breakpoints mod 1); its vertices are
// the pairwise intersections (b_i, b_j), (b_i, (b_k - b_i) mod 1) and
// ((b_k - b_j) mod 1, b_j), deduplicated and sorted lexicographically.
// Delta f is affine on every face, so min Delta over the torus is attained
// here; scanning this set decides subadditivity exactly.
std::vector<std::pair<Rational, Rational>> additivity_vertices(
    const PwlFunction& f);

// Exact decision of Delta f >= 0 via the vertex scan. summary: min_delta,
// vertex_count, plus tight_count (holds) or violation_count (fails).
// Witnesses are the lexicographically least argmin pairs (tight set when the
// minimum is zero) or violating pairs, capped at opts.witness_cap.
VerificationReport check_subadditive(const PwlFunction& f,
                                     const CheckOptions& opts = {});

// Checks f(x) + f(fpoint - x) = 1 on the grid B union (fpoint - B) mod 1,
// which pins the identity everywhere for piecewise linear f.
VerificationReport check_symmetric(const PwlFunction& f,
                                   const Rational& fpoint,
                                   const CheckOptions& opts = {});

// Minimality: f(0) = 0, f(fpoint) = 1, subadditive, symmetric. Breaches of
// the derived range bound 0 <= f <= 1 are recorded as extra witnesses.
VerificationReport check_minimal(const PwlFunction& f, const Rational& fpoint,
                                 const CheckOptions& opts = {});

// Minimal plus exactly two distinct slopes after normalization; by the
// two-slope theorem this certifies a facet.
VerificationReport check_two_slope_facet(const PwlFunction& f,
                                         const Rational& fpoint,
                                         const CheckOptions& opts = {});

// Validity via minimality (every minimal function is valid).
VerificationReport check_valid(const PwlFunction& f, const Rational& fpoint,
                               const CheckOptions& opts = {});

}  // namespace cutfn
