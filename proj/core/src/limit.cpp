#include "cutfn/limit.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "cutfn/error.hpp"
#include "cutfn/verify.hpp"

namespace cutfn {

namespace {

const Rational kZero(0), kOne(1), kTwo(2);
const Rational kHalf(1, 2);

void require_depth(std::size_t depth, std::size_t policy) {
  if (depth > policy)
    throw Error("depth " + std::to_string(depth) +
                " exceeds the construction policy cap " +
                std::to_string(policy));
}

std::vector<NegativeSegment> segments_of(const PwlFunction& f) {
  if (!f.has_tags())
    throw Error("function carries no construction tags");
  std::vector<NegativeSegment> segs;
  for (std::size_t k = 0; k < f.piece_count(); ++k)
    if (f.tags()[k].sign == PieceSign::Negative)
      segs.push_back(
          {{f.breakpoints()[k], f.breakpoints()[k + 1]}, f.tags()[k].index});
  return segs;  // ordered by left endpoint by construction
}

}  // namespace

Rational gamma_limit(const EpsilonSchedule& schedule) {
  if (!schedule.has_tail())
    throw Error("limit parameters need a schedule with a closed-form tail");
  return schedule.alpha() - schedule.tail_sum();
}

Rational convergence_constant(const EpsilonSchedule& schedule) {
  return limit_params(schedule).c;
}

LimitParams limit_params(const EpsilonSchedule& schedule) {
  Rational g = gamma_limit(schedule);
  Rational c =
      schedule.alpha() * (kOne - g) / ((kOne - schedule.alpha()) * g);
  return {std::move(g), std::move(c)};
}

SegmentLocation locate(const EpsilonSchedule& schedule, const Rational& x,
                       std::size_t max_depth) {
  if (x.sign() <= 0 || !(x < kOne))
    throw Error("locate needs a point strictly inside ]0, 1[, got " +
                x.str());
  const Rational& xm = x;
  const Rational alpha = schedule.alpha();

  SegmentLocation loc;
  if (!(xm < alpha)) {
    loc.negative = true;
    loc.interval = {alpha, kOne};
    loc.index = 0;
    return loc;
  }
  Rational a(0), b = alpha;
  for (std::size_t j = 1; j <= max_depth; ++j) {
    Rational eps = schedule.epsilon(j);
    Rational p = (a + b - eps) * kHalf;
    Rational q = p + eps;
    if (!(xm < p) && !(q < xm)) {
      loc.negative = true;
      loc.interval = {std::move(p), std::move(q)};
      loc.index = j;
      return loc;
    }
    if (xm < p)
      b = std::move(p);
    else
      a = std::move(q);
  }
  loc.negative = false;
  loc.interval = {std::move(a), std::move(b)};
  loc.index = max_depth;
  return loc;
}

Rational psi_value_at(const EpsilonSchedule& schedule, const Rational& x,
                      std::size_t depth) {
  Rational xm = x.mod1();
  const Rational alpha = schedule.alpha();
  if (xm.is_zero()) return kZero;
  if (!(xm < alpha)) return (kOne - xm) / (kOne - alpha);

  Rational a(0), b = alpha, va(0), vb(1);
  for (std::size_t j = 1; j <= depth; ++j) {
    Rational eps = schedule.epsilon(j);
    Rational p = (a + b - eps) * kHalf;
    Rational q = p + eps;
    Rational mid = (va + vb) * kHalf;
    Rational drop = eps / (kTwo * (kOne - alpha));
    if (!(xm < p) && !(q < xm))
      return mid + drop - (xm - p) / (kOne - alpha);
    if (xm < p) {
      b = std::move(p);
      vb = mid + drop;
    } else {
      a = std::move(q);
      va = mid - drop;
    }
  }
  return va + (vb - va) * (xm - a) / (b - a);
}

LimitEvaluation eval_limit(const EpsilonSchedule& schedule, const Rational& x,
                           const Rational& tol) {
  if (tol.sign() <= 0)
    throw Error("tolerance must be positive, got " + tol.str());
  LimitParams lp = limit_params(schedule);

  LimitEvaluation out;
  out.point = x.mod1();
  const Rational& xm = out.point;
  if (xm.is_zero()) {
    out.mode = LimitEvaluation::Mode::Exact;
    out.value = kZero;
    return out;
  }
  const Rational alpha = schedule.alpha();
  if (!(xm < alpha)) {
    out.mode = LimitEvaluation::Mode::Exact;
    out.value = (kOne - xm) / (kOne - alpha);
    return out;
  }

  // Smallest d with c / 2^(d-1) <= tol; radius tracks c / 2^(d-1).
  std::size_t d = 0;
  Rational radius = lp.c * kTwo;
  while (tol < radius) {
    radius = radius * kHalf;
    ++d;
  }

  Rational a(0), b = alpha, va(0), vb(1);
  for (std::size_t j = 1; j <= d; ++j) {
    Rational eps = schedule.epsilon(j);
    Rational p = (a + b - eps) * kHalf;
    Rational q = p + eps;
    Rational mid = (va + vb) * kHalf;
    Rational drop = eps / (kTwo * (kOne - alpha));
    if (!(xm < p) && !(q < xm)) {
      out.mode = LimitEvaluation::Mode::Exact;
      out.value = mid + drop - (xm - p) / (kOne - alpha);
      out.segment_index = j;
      out.depth = j;
      return out;
    }
    if (xm < p) {
      b = std::move(p);
      vb = mid + drop;
    } else {
      a = std::move(q);
      va = mid - drop;
    }
  }

  Rational v = va + (vb - va) * (xm - a) / (b - a);
  out.mode = LimitEvaluation::Mode::Enclosure;
  out.depth = d;
  out.lower = max(kZero, v - radius);
  out.upper = min(kOne, v + radius);
  return out;
}

std::vector<NegativeSegment> negative_segments(const EpsilonSchedule& schedule,
                                               std::size_t depth,
                                               std::size_t depth_policy) {
  require_depth(depth, depth_policy);
  return segments_of(build(schedule, depth));
}

Rational density_gap(const EpsilonSchedule& schedule, std::size_t depth,
                     std::size_t depth_policy) {
  std::vector<NegativeSegment> segs =
      negative_segments(schedule, depth, depth_policy);
  Rational prev_end(0), gap(0);
  for (const NegativeSegment& s : segs) {
    gap = max(gap, s.interval.lo - prev_end);
    prev_end = s.interval.hi;
  }
  return max(gap, kOne - prev_end);
}

VerificationReport non_pwl_evidence(const EpsilonSchedule& schedule,
                                    std::size_t depth,
                                    std::size_t depth_policy) {
  require_depth(depth, depth_policy);
  std::vector<NegativeSegment> segs =
      negative_segments(schedule, depth, depth_policy);

  VerificationReport r;
  r.property = Property::NonPiecewiseLinear;
  r.holds = true;

  unsigned long long expected = 1ull << depth;
  if (segs.size() != expected) {
    r.holds = false;
    r.witnesses.push_back({WitnessKind::StructureItem,
                           "negative segment count", {},
                           Rational(static_cast<long>(segs.size())),
                           Rational(static_cast<long>(expected))});
  }

  // New segments keep appearing arbitrarily close to 0: for every k <= depth
  // some segment closure sits inside ]0, 2^-k[. A piecewise linear function
  // has finitely many pieces, so no such family can exist for it.
  for (std::size_t k = 1; k <= depth; ++k) {
    Rational threshold = Rational::pow2(-static_cast<long>(k));
    const NegativeSegment* found = nullptr;
    for (const NegativeSegment& s : segs) {
      if (s.interval.lo.sign() > 0 && s.interval.hi < threshold) {
        found = &s;
        break;
      }
      if (!(s.interval.lo < threshold)) break;
    }
    if (found) {
      r.witnesses.push_back({WitnessKind::SegmentWitness,
                             "segment inside ]0, 2^-" + std::to_string(k) +
                                 "[",
                             {found->interval.lo, found->interval.hi,
                              threshold},
                             found->interval.hi, threshold});
    } else {
      r.holds = false;
      r.witnesses.push_back({WitnessKind::SegmentWitness,
                             "no segment inside ]0, 2^-" + std::to_string(k) +
                                 "[",
                             {threshold}, threshold, threshold});
    }
  }

  r.summary["depth"] = Rational(static_cast<long>(depth));
  r.summary["segment_count"] = Rational(static_cast<long>(segs.size()));
  Rational prev_end(0), gap(0);
  for (const NegativeSegment& s : segs) {
    gap = max(gap, s.interval.lo - prev_end);
    prev_end = s.interval.hi;
  }
  r.summary["density_gap"] = max(gap, kOne - prev_end);
  return r;
}

namespace {

struct ChainLink {
  Rational y, z, a;
};

// Deterministic search for y + z = probe with z inside a negative segment
// below `upper` and y inside some negative segment: widest usable z-segment
// first, then the y-segment with the longest overlap. Both points end up in
// persistent closures, so f evaluates the limit exactly there.
bool find_chain_link(const std::vector<NegativeSegment>& segs,
                     const PwlFunction& f, const Rational& probe,
                     const Rational& upper, ChainLink& out) {
  std::vector<const NegativeSegment*> zcands;
  for (const NegativeSegment& s : segs)
    if (s.interval.lo < upper) zcands.push_back(&s);
  std::stable_sort(zcands.begin(), zcands.end(),
                   [&](const NegativeSegment* a, const NegativeSegment* b) {
                     Rational wa = min(a->interval.hi, upper) - a->interval.lo;
                     Rational wb = min(b->interval.hi, upper) - b->interval.lo;
                     if (wa != wb) return wb < wa;
                     return a->interval.lo < b->interval.lo;
                   });

  for (const NegativeSegment* z : zcands) {
    Rational zlo = z->interval.lo, zhi = min(z->interval.hi, upper);
    Rational ilo = probe - zhi, ihi = probe - zlo;
    bool have = false;
    Rational best_len, best_y;
    for (const NegativeSegment& w : segs) {
      if (ihi < w.interval.lo) break;
      if (w.interval.hi < ilo) continue;
      Rational olo = max(w.interval.lo, ilo), ohi = min(w.interval.hi, ihi);
      Rational len = ohi - olo;
      Rational y = (olo + ohi) * kHalf;
      Rational zz = probe - y;
      if (!(kZero < zz) || !(zz < upper)) continue;
      if (!have || best_len < len) {
        have = true;
        best_len = len;
        best_y = y;
      }
    }
    if (have) {
      out.y = best_y;
      out.z = probe - best_y;
      out.a = f.eval(out.y) + f.eval(out.z);
      return true;
    }
  }
  return false;
}

}  // namespace

VerificationReport facet_evidence(const EpsilonSchedule& schedule,
                                  std::size_t depth,
                                  std::vector<Rational> probes,
                                  std::size_t depth_policy) {
  require_depth(depth, depth_policy);
  if (!schedule.has_tail())
    throw Error("facet evidence needs a schedule with a closed-form tail");
  if (probes.empty())
    probes = {Rational(1, 3), Rational(2, 3), Rational(1, 7)};
  for (Rational& p : probes) {
    p = p.mod1();
    if (p.is_zero())
      throw Error("probe points must be nonzero mod 1");
  }

  FamilyBuilder builder(schedule);
  const PwlFunction& f = builder.at(depth);
  std::vector<NegativeSegment> segs = segments_of(f);

  VerificationReport r;
  r.property = Property::FacetEvidence;
  r.holds = true;
  constexpr std::size_t kCap = 64;
  auto fail = [&](Witness w) {
    r.holds = false;
    if (r.witnesses.size() < kCap) r.witnesses.push_back(std::move(w));
  };

  // (a) Delta f is constant on U x V per segment (all three slopes are the
  // common negative slope), so vanishing at the cell corners and center
  // certifies additivity on the whole cell.
  unsigned long long claim1_points = 0;
  for (const NegativeSegment& s : segs) {
    const Rational &a = s.interval.lo, &b = s.interval.hi;
    Rational umid = (a + b) * kHalf;
    Rational vlo = kOne - (b - a) * kHalf;
    const Rational us[2] = {umid, b};
    const Rational vs[2] = {vlo, kOne};
    Rational pts[5][2] = {{us[0], vs[0]},
                          {us[0], vs[1]},
                          {us[1], vs[0]},
                          {us[1], vs[1]},
                          {(us[0] + us[1]) * kHalf, (vs[0] + vs[1]) * kHalf}};
    for (auto& uv : pts) {
      ++claim1_points;
      Rational d = delta(f, uv[0], uv[1]);
      if (!d.is_zero())
        fail({WitnessKind::SubadditivityPair, "cell vertex not additive",
              {uv[0], uv[1]}, f.eval(uv[0]) + f.eval(uv[1]),
              f.eval(uv[0] + uv[1])});
    }
  }

  // (b) midpoint relations. Segment left endpoints are unique and sorted.
  auto find_by_start = [&](const Rational& t) -> const NegativeSegment* {
    auto it = std::lower_bound(segs.begin(), segs.end(), t,
                               [](const NegativeSegment& s, const Rational& v) {
                                 return s.interval.lo < v;
                               });
    if (it == segs.end() || it->interval.lo != t) return nullptr;
    return &*it;
  };
  std::map<std::size_t, std::vector<const NegativeSegment*>> by_index;
  for (const NegativeSegment& s : segs) by_index[s.index].push_back(&s);

  unsigned long long midpoint_relations = 0;
  for (std::size_t k1 = 1; k1 <= depth; ++k1) {
    const auto& list = by_index[k1];
    if (list.empty()) {
      fail({WitnessKind::SegmentWitness,
            "no segments of index " + std::to_string(k1), {},
            Rational(0), Rational(static_cast<long>(k1))});
      continue;
    }
    const NegativeSegment* sc = list.front();
    Rational m = (sc->interval.lo + sc->interval.hi) * kHalf;

    // Doubling the leftmost midpoint lands on the start of the previous
    // leftmost segment, of index exactly k1 - 1.
    ++midpoint_relations;
    Rational t2 = (m + m).mod1();
    if (const NegativeSegment* hit = find_by_start(t2)) {
      if (hit->index != k1 - 1)
        fail({WitnessKind::SegmentWitness, "doubled midpoint segment index",
              {t2}, Rational(static_cast<long>(hit->index)),
              Rational(static_cast<long>(k1 - 1))});
      Rational lhs = f.eval(m) + f.eval(m);
      if (lhs != f.eval(t2))
        fail({WitnessKind::SubadditivityPair, "midpoint relation violated",
              {m, m}, lhs, f.eval(t2)});
    } else {
      fail({WitnessKind::SegmentWitness,
            "no segment starts at doubled midpoint", {m, t2}, t2, t2});
    }

    // Every other index-k1 midpoint m_s pairs with m: the sum lands on the
    // right end of the positive interval that spawned s, the start of a
    // negative segment of index at most k1 - 1.
    for (std::size_t si = 1; si < list.size(); ++si) {
      ++midpoint_relations;
      const NegativeSegment* s = list[si];
      Rational ms = (s->interval.lo + s->interval.hi) * kHalf;
      Rational t = (ms + m).mod1();
      if (const NegativeSegment* hit = find_by_start(t)) {
        if (hit->index > k1 - 1)
          fail({WitnessKind::SegmentWitness, "midpoint image segment index",
                {t}, Rational(static_cast<long>(hit->index)),
                Rational(static_cast<long>(k1 - 1))});
        Rational lhs = f.eval(ms) + f.eval(m);
        if (lhs != f.eval(t))
          fail({WitnessKind::SubadditivityPair, "midpoint relation violated",
                {ms, m}, lhs, f.eval(t)});
      } else {
        fail({WitnessKind::SegmentWitness,
              "no segment starts at midpoint image", {ms, m, t}, t, t});
      }
    }
  }

  // (c) subadditivity chains toward each probe.
  unsigned long long chain_links = 0;
  const Rational chain_tol = Rational::pow2(-40);
  for (const Rational& probe : probes) {
    LimitEvaluation ev = eval_limit(schedule, probe, chain_tol);
    Rational lo =
        ev.mode == LimitEvaluation::Mode::Exact ? ev.value : ev.lower;

    std::map<std::size_t, ChainLink> raw;
    for (std::size_t n = 2; n <= depth; ++n) {
      Rational upper = min(Rational(1, static_cast<long>(n)), probe);
      ChainLink link;
      if (find_chain_link(segs, f, probe, upper, link)) raw[n] = link;
    }

    // Walk n downward so each link's bound is at least the next one's; a
    // link may be reused for smaller n since z < 1/(n+1) < 1/n.
    std::map<std::size_t, ChainLink> chain;
    bool have_last = false;
    ChainLink last;
    for (std::size_t n = depth; n >= 2 && depth >= 2; --n) {
      auto it = raw.find(n);
      if (it != raw.end() && (!have_last || !(it->second.a < last.a))) {
        last = it->second;
        have_last = true;
      } else if (!have_last) {
        fail({WitnessKind::ChainLink,
              "no chain witness for n = " + std::to_string(n),
              {probe, Rational(static_cast<long>(n))}, Rational(0),
              Rational(0)});
        continue;
      }
      chain[n] = last;
    }

    for (const auto& [n, link] : chain) {
      ++chain_links;
      if (link.a < lo)
        fail({WitnessKind::ChainLink, "chain bound violated",
              {probe, Rational(static_cast<long>(n)), link.y, link.z},
              link.a, lo});
      else if (r.witnesses.size() < kCap)
        r.witnesses.push_back(
            {WitnessKind::ChainLink,
             "probe " + probe.str() + " n=" + std::to_string(n),
             {probe, Rational(static_cast<long>(n)), link.y, link.z}, link.a,
             lo});
    }
  }

  r.summary["depth"] = Rational(static_cast<long>(depth));
  r.summary["segment_count"] = Rational(static_cast<long>(segs.size()));
  r.summary["probe_count"] = Rational(static_cast<long>(probes.size()));
  r.summary["claim1_points"] = Rational(static_cast<long>(claim1_points));
  r.summary["midpoint_relations"] =
      Rational(static_cast<long>(midpoint_relations));
  r.summary["chain_links"] = Rational(static_cast<long>(chain_links));
  return r;
}

}  // namespace cutfn
