#include "cutfn/construct.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "cutfn/error.hpp"

namespace cutfn {

namespace {

void require_alpha(const Rational& alpha) {
  if (!(Rational(0) < alpha && alpha < Rational(1)))
    throw Error("alpha must lie strictly between 0 and 1, got " + alpha.str());
}

constexpr std::size_t kStructureWitnessCap = 64;

}  // namespace

EpsilonSchedule EpsilonSchedule::geometric(Rational alpha, Rational base,
                                           Rational ratio) {
  require_alpha(alpha);
  if (base.sign() <= 0)
    throw Error("geometric base must be positive, got " + base.str());
  if (ratio.sign() <= 0)
    throw Error("geometric ratio must be positive, got " + ratio.str());
  if (!(Rational(2) * ratio < Rational(1)))
    throw Error("geometric ratio must satisfy 2*ratio < 1, got " +
                ratio.str());
  Rational eps1 = base * ratio;
  if (Rational(1) - alpha < eps1)
    throw Error("eps_1 = " + eps1.str() + " exceeds 1 - alpha = " +
                (Rational(1) - alpha).str());
  Rational tail = eps1 / (Rational(1) - Rational(2) * ratio);
  if (!(tail < alpha))
    throw Error("weighted tail sum " + tail.str() +
                " must stay below alpha = " + alpha.str());

  EpsilonSchedule s;
  s.kind_ = Kind::Geometric;
  s.alpha_ = std::move(alpha);
  s.base_ = std::move(base);
  s.ratio_ = std::move(ratio);
  return s;
}

EpsilonSchedule EpsilonSchedule::explicit_list(Rational alpha,
                                               std::vector<Rational> epsilons) {
  require_alpha(alpha);
  Rational weighted, pw(1);
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    const Rational& e = epsilons[k];
    if (e.sign() <= 0)
      throw Error("eps_" + std::to_string(k + 1) + " must be positive, got " +
                  e.str());
    if (k > 0 && epsilons[k - 1] < e)
      throw Error("epsilons must be nonincreasing; eps_" + std::to_string(k) +
                  " = " + epsilons[k - 1].str() + " < eps_" +
                  std::to_string(k + 1) + " = " + e.str());
    weighted += pw * e;
    if (!(weighted < alpha))
      throw Error("weighted prefix sum through eps_" + std::to_string(k + 1) +
                  " is " + weighted.str() + ", not below alpha = " +
                  alpha.str());
    pw *= Rational(2);
  }
  if (!epsilons.empty() && Rational(1) - alpha < epsilons.front())
    throw Error("eps_1 = " + epsilons.front().str() + " exceeds 1 - alpha = " +
                (Rational(1) - alpha).str());

  EpsilonSchedule s;
  s.kind_ = Kind::Explicit;
  s.alpha_ = std::move(alpha);
  s.epsilons_ = std::move(epsilons);
  return s;
}

const Rational& EpsilonSchedule::base() const {
  if (kind_ != Kind::Geometric)
    throw Error("base is defined for geometric schedules only");
  return base_;
}

const Rational& EpsilonSchedule::ratio() const {
  if (kind_ != Kind::Geometric)
    throw Error("ratio is defined for geometric schedules only");
  return ratio_;
}

const std::vector<Rational>& EpsilonSchedule::epsilons() const {
  if (kind_ != Kind::Explicit)
    throw Error("epsilons list is defined for explicit schedules only");
  return epsilons_;
}

Rational EpsilonSchedule::epsilon(std::size_t i) const {
  if (i == 0) throw Error("epsilon index is 1-based");
  if (kind_ == Kind::Geometric) return base_ * ratio_.pow(i);
  if (i > epsilons_.size())
    throw Error("schedule exhausted: eps_" + std::to_string(i) +
                " requested but only " + std::to_string(epsilons_.size()) +
                " are given");
  return epsilons_[i - 1];
}

std::optional<std::size_t> EpsilonSchedule::max_depth() const {
  if (kind_ == Kind::Geometric) return std::nullopt;
  return epsilons_.size();
}

Rational EpsilonSchedule::gamma(std::size_t i) const {
  Rational weighted, pw(1);
  for (std::size_t k = 1; k <= i; ++k) {
    weighted += pw * epsilon(k);
    pw *= Rational(2);
  }
  return alpha_ - weighted;
}

Rational EpsilonSchedule::tail_sum() const {
  if (!has_tail())
    throw Error("tail sum is defined for geometric schedules only");
  return base_ * ratio_ / (Rational(1) - Rational(2) * ratio_);
}

PwlFunction gmi(const Rational& alpha) {
  require_alpha(alpha);
  return PwlFunction({Rational(0), alpha, Rational(1)},
                     {Rational(0), Rational(1), Rational(0)},
                     {{PieceSign::Positive, 0}, {PieceSign::Negative, 0}});
}

PwlFunction step(const PwlFunction& f, const Rational& alpha,
                 const Rational& eps) {
  require_alpha(alpha);
  if (eps.sign() <= 0)
    throw Error("step epsilon must be positive, got " + eps.str());

  PwlFunction g = f.normalized();
  std::vector<SegmentTag> tags;
  if (g.has_tags()) {
    tags = g.tags();
  } else {
    tags.reserve(g.piece_count());
    for (std::size_t k = 0; k < g.piece_count(); ++k)
      tags.push_back({g.piece_slope(k).sign() > 0 ? PieceSign::Positive
                                                  : PieceSign::Negative,
                      0});
  }
  std::uint32_t next = 0;
  for (const SegmentTag& t : tags) next = std::max(next, t.index);
  ++next;

  const Rational half(1, 2);
  Rational drop = eps / (Rational(2) * (Rational(1) - alpha));

  std::vector<Rational> nb{g.breakpoints().front()};
  std::vector<Rational> nv{g.values().front()};
  std::vector<SegmentTag> nt;
  for (std::size_t k = 0; k < g.piece_count(); ++k) {
    const Rational& a = g.breakpoints()[k];
    const Rational& b = g.breakpoints()[k + 1];
    if (g.piece_slope(k).sign() <= 0) {
      nb.push_back(b);
      nv.push_back(g.values()[k + 1]);
      nt.push_back(tags[k]);
      continue;
    }
    Rational p = (a + b - eps) * half;
    Rational q = p + eps;
    if (!(a < p && q < b))
      throw Error("segment replacement does not fit: eps = " + eps.str() +
                  " on positive interval [" + a.str() + ", " + b.str() + "]");
    Rational mid = (g.values()[k] + g.values()[k + 1]) * half;
    nb.push_back(p);
    nv.push_back(mid + drop);
    nt.push_back({PieceSign::Positive, next});
    nb.push_back(q);
    nv.push_back(mid - drop);
    nt.push_back({PieceSign::Negative, next});
    nb.push_back(b);
    nv.push_back(g.values()[k + 1]);
    nt.push_back({PieceSign::Positive, next});
  }
  return PwlFunction(std::move(nb), std::move(nv), std::move(nt));
}

FamilyBuilder::FamilyBuilder(EpsilonSchedule schedule)
    : schedule_(std::move(schedule)) {}

const PwlFunction& FamilyBuilder::at(std::size_t i) {
  while (ladder_.size() <= i) {
    if (ladder_.empty())
      ladder_.push_back(gmi(schedule_.alpha()));
    else
      ladder_.push_back(step(ladder_.back(), schedule_.alpha(),
                             schedule_.epsilon(ladder_.size())));
  }
  return ladder_[i];
}

PwlFunction build(const EpsilonSchedule& schedule, std::size_t i) {
  FamilyBuilder b(schedule);
  return b.at(i);
}

Rational gamma_i(const EpsilonSchedule& schedule, std::size_t i) {
  return schedule.gamma(i);
}

VerificationReport structure_report(const PwlFunction& f,
                                    const EpsilonSchedule& schedule,
                                    std::size_t i) {
  if (i > 40) throw Error("structure depth too large: " + std::to_string(i));
  const Rational alpha = schedule.alpha();
  const Rational g = schedule.gamma(i);
  const unsigned long long expected_count = 1ull << i;

  VerificationReport r;
  r.property = Property::Structure;
  r.holds = true;
  auto fail = [&](Witness w) {
    r.holds = false;
    if (r.witnesses.size() < kStructureWitnessCap)
      r.witnesses.push_back(std::move(w));
  };

  const Rational expected_pos_len = g / Rational::pow2(static_cast<long>(i));
  const Rational expected_pos_slope =
      (Rational(1) - g) / ((Rational(1) - alpha) * g);
  const Rational expected_neg_slope =
      Rational(-1) / (Rational(1) - alpha);

  PwlFunction nf = f.normalized();
  unsigned long long pos = 0, neg = 0;
  std::map<Rational, unsigned long long> neg_lengths;
  for (std::size_t k = 0; k < nf.piece_count(); ++k) {
    Rational slope = nf.piece_slope(k);
    Interval piece{nf.breakpoints()[k], nf.breakpoints()[k + 1]};
    if (slope.sign() > 0) {
      ++pos;
      if (piece.length() != expected_pos_len)
        fail({WitnessKind::StructureItem, "positive piece length",
              {piece.lo, piece.hi}, piece.length(), expected_pos_len});
      if (slope != expected_pos_slope)
        fail({WitnessKind::StructureItem, "positive piece slope",
              {piece.lo, piece.hi}, slope, expected_pos_slope});
    } else if (slope.sign() < 0) {
      ++neg;
      ++neg_lengths[piece.length()];
      if (slope != expected_neg_slope)
        fail({WitnessKind::StructureItem, "negative piece slope",
              {piece.lo, piece.hi}, slope, expected_neg_slope});
    } else {
      fail({WitnessKind::StructureItem, "zero slope piece",
            {piece.lo, piece.hi}, slope, expected_pos_slope});
    }
  }

  if (pos != expected_count)
    fail({WitnessKind::StructureItem, "positive piece count", {},
          Rational(static_cast<long>(pos)),
          Rational(static_cast<long>(expected_count))});
  if (neg != expected_count)
    fail({WitnessKind::StructureItem, "negative piece count", {},
          Rational(static_cast<long>(neg)),
          Rational(static_cast<long>(expected_count))});

  std::map<Rational, unsigned long long> expected_lengths;
  ++expected_lengths[Rational(1) - alpha];
  {
    unsigned long long mult = 1;
    for (std::size_t k = 1; k <= i; ++k, mult <<= 1)
      expected_lengths[schedule.epsilon(k)] += mult;
  }
  for (const auto& [len, count] : expected_lengths) {
    auto it = neg_lengths.find(len);
    unsigned long long got = it == neg_lengths.end() ? 0 : it->second;
    if (got != count)
      fail({WitnessKind::StructureItem, "negative length multiset",
            {len}, Rational(static_cast<long>(got)),
            Rational(static_cast<long>(count))});
  }
  for (const auto& [len, count] : neg_lengths)
    if (!expected_lengths.count(len))
      fail({WitnessKind::StructureItem, "unexpected negative length",
            {len}, Rational(static_cast<long>(count)), Rational(0)});

  r.summary["gamma"] = g;
  r.summary["positive_count"] = Rational(static_cast<long>(pos));
  r.summary["negative_count"] = Rational(static_cast<long>(neg));
  r.summary["positive_length"] = expected_pos_len;
  r.summary["positive_slope"] = expected_pos_slope;
  r.summary["negative_slope"] = expected_neg_slope;
  return r;
}

std::pair<Rational, Rational> lambda_mu(const Rational& alpha,
                                        const Rational& eps1) {
  require_alpha(alpha);
  if (eps1.sign() <= 0)
    throw Error("eps_1 must be positive, got " + eps1.str());
  if (Rational(1) - alpha < eps1)
    throw Error("eps_1 = " + eps1.str() + " exceeds 1 - alpha");
  Rational denom = (alpha + eps1) * (Rational(1) - alpha);
  return {(Rational(1) - alpha - eps1) / denom, eps1 / denom};
}

EpsilonSchedule reduced_parameters(const EpsilonSchedule& schedule) {
  const Rational alpha = schedule.alpha();
  const Rational eps1 = schedule.epsilon(1);
  const Rational denom = alpha + eps1;
  const Rational alpha_red = (alpha - eps1) / denom;

  if (schedule.kind() == EpsilonSchedule::Kind::Geometric) {
    Rational base_red =
        Rational(2) * schedule.base() * schedule.ratio() / denom;
    return EpsilonSchedule::geometric(alpha_red, base_red, schedule.ratio());
  }
  std::vector<Rational> eps_red;
  const auto& eps = schedule.epsilons();
  eps_red.reserve(eps.size() - 1);
  for (std::size_t j = 1; j < eps.size(); ++j)
    eps_red.push_back(Rational(2) * eps[j] / denom);
  return EpsilonSchedule::explicit_list(alpha_red, std::move(eps_red));
}

VerificationReport verify_recursive_decomposition(
    const EpsilonSchedule& schedule, std::size_t i) {
  if (i == 0)
    throw Error("recursive decomposition needs depth >= 1");

  const Rational alpha = schedule.alpha();
  const Rational eps1 = schedule.epsilon(1);
  const Rational denom = alpha + eps1;
  auto [lambda, mu] = lambda_mu(alpha, eps1);

  EpsilonSchedule reduced = reduced_parameters(schedule);
  PwlFunction f = build(schedule, i);
  PwlFunction g = build(reduced, i - 1);
  ScaledFunction h = scale(std::move(g), mu, Rational(2) / denom);

  std::vector<Rational> grid = h.breakpoints_in(Rational(0), denom);
  for (const Rational& b : f.breakpoints())
    if (!(denom < b)) grid.push_back(b);
  grid.push_back(denom);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  VerificationReport r;
  r.property = Property::RecursiveDecomposition;
  r.holds = true;
  for (const Rational& x : grid) {
    Rational lhs = f.eval(x);
    Rational rhs = lambda * x + h.eval(x);
    if (lhs != rhs) {
      r.holds = false;
      if (r.witnesses.size() < kStructureWitnessCap)
        r.witnesses.push_back({WitnessKind::DecompositionPoint,
                               "decomposition mismatch", {x}, lhs, rhs});
    }
  }
  r.summary["lambda"] = lambda;
  r.summary["mu"] = mu;
  r.summary["alpha_reduced"] = reduced.alpha();
  r.summary["grid_points"] = Rational(static_cast<long>(grid.size()));
  return r;
}

}  // namespace cutfn
