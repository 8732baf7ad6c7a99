#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <doctest.h>

#include "cutfn/construct.hpp"
#include "cutfn/pwl.hpp"
#include "cutfn/rational.hpp"
#include "cutfn/verify.hpp"

namespace cutfn {
inline doctest::String toString(const Rational& r) {
  return r.str().c_str();
}
}  // namespace cutfn

namespace testsupport {

using cutfn::EpsilonSchedule;
using cutfn::PwlFunction;
using cutfn::Rational;

inline Rational R(const char* s) { return Rational::parse(s); }

inline EpsilonSchedule standard_schedule() {
  return EpsilonSchedule::geometric(R("1/2"), R("1/2"), R("1/4"));
}

inline PwlFunction make_fn(const std::vector<const char*>& bps,
                           const std::vector<const char*>& vals) {
  std::vector<Rational> b, v;
  for (const char* s : bps) b.push_back(R(s));
  for (const char* s : vals) v.push_back(R(s));
  return PwlFunction(std::move(b), std::move(v));
}

// Minimal with three distinct slopes {4, 0, -2}; symmetric about 1/2.
inline PwlFunction three_slope_minimal() {
  return make_fn({"0", "1/8", "3/8", "1/2", "1"},
                 {"0", "1/2", "1/2", "1", "0"});
}

inline PwlFunction bump_value(const PwlFunction& f, std::size_t j,
                              const Rational& delta) {
  std::vector<Rational> v = f.values();
  v[j] = v[j] + delta;
  return PwlFunction(f.breakpoints(), v);
}

// Literal transcription of the segment-replacement formulas, kept separate
// from the library implementation on purpose.
inline PwlFunction step_oracle(const PwlFunction& f, const Rational& alpha,
                               const Rational& eps) {
  const std::vector<Rational>& B = f.breakpoints();
  const std::vector<Rational>& V = f.values();
  const Rational two(2), one(1);
  std::vector<Rational> nb{B[0]}, nv{V[0]};
  for (std::size_t k = 0; k + 1 < B.size(); ++k) {
    Rational slope = (V[k + 1] - V[k]) / (B[k + 1] - B[k]);
    if (slope.sign() > 0) {
      Rational p = (B[k] + B[k + 1] - eps) / two;
      Rational q = p + eps;
      Rational mid = (V[k] + V[k + 1]) / two;
      Rational drop = eps / (two * (one - alpha));
      nb.push_back(p);
      nv.push_back(mid + drop);
      nb.push_back(q);
      nv.push_back(mid - drop);
    }
    nb.push_back(B[k + 1]);
    nv.push_back(V[k + 1]);
  }
  return PwlFunction(std::move(nb), std::move(nv));
}

// Every additivity-complex vertex by its defining conditions, straight
// quadratic enumeration with no sharing against the library version.
inline std::vector<std::pair<Rational, Rational>> vertices_oracle(
    const PwlFunction& f) {
  std::vector<Rational> B(f.breakpoints().begin(),
                          f.breakpoints().end() - 1);
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& x : B)
    for (const Rational& y : B) out.emplace_back(x, y);
  for (const Rational& x : B)
    for (const Rational& c : B) out.emplace_back(x, (c - x).mod1());
  for (const Rational& y : B)
    for (const Rational& c : B) out.emplace_back((c - y).mod1(), y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Rational min_delta_oracle(const PwlFunction& f) {
  auto vs = vertices_oracle(f);
  Rational best = cutfn::delta(f, vs.front().first, vs.front().second);
  for (const auto& [x, y] : vs) best = min(best, cutfn::delta(f, x, y));
  return best;
}

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}

  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(g);
  }

  // uniform-ish rational in [0, 1) with denominator <= dmax
  Rational rational(long dmax) {
    long d = integer(1, dmax);
    return Rational(integer(0, d - 1), d);
  }
};

}  // namespace testsupport
