#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cutfn/pwl.hpp"
#include "cutfn/report.hpp"

namespace cutfn {

// Apex displacement schedule: alpha together with eps_1, eps_2, ...
//
// Validity, checked on construction:
//   0 < alpha < 1; eps_i > 0 nonincreasing; eps_1 <= 1 - alpha; and the
//   weighted prefix sums sum_{k<=i} 2^(k-1) eps_k stay strictly below alpha
//   for every available i. Geometric schedules (eps_i = base * ratio^i) must
//   satisfy 2 * ratio < 1 so the full weighted tail converges, and the tail
//   sum itself must stay below alpha.
class EpsilonSchedule {
 public:
  enum class Kind { Geometric, Explicit };

  static EpsilonSchedule geometric(Rational alpha, Rational base,
                                   Rational ratio);
  static EpsilonSchedule explicit_list(Rational alpha,
                                       std::vector<Rational> epsilons);

  Kind kind() const { return kind_; }
  const Rational& alpha() const { return alpha_; }
  const Rational& base() const;
  const Rational& ratio() const;
  const std::vector<Rational>& epsilons() const;

  // eps_i, 1-based. Throws when an explicit schedule is exhausted.
  Rational epsilon(std::size_t i) const;
  // Largest i with eps_i defined; nullopt for geometric schedules.
  std::optional<std::size_t> max_depth() const;
  // gamma_i = alpha - sum_{k<=i} 2^(k-1) eps_k: total positive length at
  // depth i.
  Rational gamma(std::size_t i) const;
  // True when the infinite weighted sum sum 2^(k-1) eps_k has a closed form.
  bool has_tail() const { return kind_ == Kind::Geometric; }
  Rational tail_sum() const;

 private:
  EpsilonSchedule() = default;

  Kind kind_ = Kind::Explicit;
  Rational alpha_;
  Rational base_, ratio_;
  std::vector<Rational> epsilons_;
};

// The seed function: breakpoints {0, alpha, 1}, values {0, 1, 0}.
PwlFunction gmi(const Rational& alpha);

// One segment-replacement step. Every maximal positive-slope interval [a, b]
// of f keeps its endpoint values and has its middle replaced by a segment of
// slope -1/(1-alpha) and width eps centered at (a+b)/2; the two flanking
// pieces steepen to compensate. New pieces are tagged with the next step
// index. Throws when eps does not fit inside some positive interval.
PwlFunction step(const PwlFunction& f, const Rational& alpha,
                 const Rational& eps);

// psi_i for the schedule: gmi(alpha) advanced i steps.
PwlFunction build(const EpsilonSchedule& schedule, std::size_t i);

// Memoizes the ladder psi_0..psi_i so repeated queries share work.
class FamilyBuilder {
 public:
  explicit FamilyBuilder(EpsilonSchedule schedule);
  const EpsilonSchedule& schedule() const { return schedule_; }
  const PwlFunction& at(std::size_t i);

 private:
  EpsilonSchedule schedule_;
  std::vector<PwlFunction> ladder_;
};

Rational gamma_i(const EpsilonSchedule& schedule, std::size_t i);

// Exact depth-i profile check: 2^i positive pieces, each of length
// gamma_i / 2^i with slope (1 - gamma_i)/((1 - alpha) gamma_i); 2^i negative
// pieces of slope -1/(1-alpha) whose length multiset is {1 - alpha} plus
// {eps_k with multiplicity 2^(k-1)}. Runs on the normalized form of f.
VerificationReport structure_report(const PwlFunction& f,
                                    const EpsilonSchedule& schedule,
                                    std::size_t i);

// Self-similarity coefficients on [0, alpha + eps_1]:
//   lambda = (1 - alpha - eps_1) / ((alpha + eps_1)(1 - alpha))
//   mu     = eps_1 / ((alpha + eps_1)(1 - alpha))
std::pair<Rational, Rational> lambda_mu(const Rational& alpha,
                                        const Rational& eps1);

// Parameters of the reduced family appearing in the decomposition:
// alpha' = (alpha - eps_1)/(alpha + eps_1), eps'_j = 2 eps_{j+1}/(alpha+eps_1).
// A geometric schedule reduces to a geometric schedule with the same ratio.
EpsilonSchedule reduced_parameters(const EpsilonSchedule& schedule);

// Verifies psi_i(x) = lambda x + mu psi'_{i-1}(2x/(alpha + eps_1)) for
// x in [0, alpha + eps_1] by exact evaluation on the joint breakpoint grid
// (a piecewise linear identity on a grid containing all breakpoints of both
// sides holds everywhere).
VerificationReport verify_recursive_decomposition(
    const EpsilonSchedule& schedule, std::size_t i);

}  // namespace cutfn
