#include "cutfn/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "cutfn/error.hpp"

namespace cutfn {
namespace {

using i64 = std::int64_t;
using i128 = __int128;
using RPair = std::pair<Rational, Rational>;

mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u =
      neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class r(static_cast<unsigned long>(u >> 64));
  r <<= 64;
  r += static_cast<unsigned long>(u);
  return neg ? mpz_class(-r) : r;
}

mpq_class mpq_from_frac(i128 num, i128 den) {
  mpq_class q(mpz_from_i128(num), mpz_from_i128(den));
  q.canonicalize();
  return q;
}

// Keeps the lexicographically least `cap` elements seen.
template <class P>
struct BoundedLexSet {
  std::size_t cap = 0;
  std::vector<P> items;

  void insert(const P& p) {
    auto it = std::lower_bound(items.begin(), items.end(), p);
    if (items.size() < cap)
      items.insert(it, p);
    else if (it != items.end()) {
      items.insert(it, p);
      items.pop_back();
    }
  }
};

struct ChunkOut {
  bool has_min = false;
  mpq_class min;
  BoundedLexSet<RPair> arg, viol;
  unsigned long long arg_count = 0, viol_count = 0, vertices = 0;
};

// The enumeration covers every complex vertex exactly once: family 0 yields
// all pairs with x and y both breakpoints, family 1 those with x and x+y
// breakpoints but y not, family 2 those with y and x+y breakpoints but x
// not. Any vertex satisfies at least two of the three breakpoint
// conditions, so the three disjoint families are complete. Counts and
// capped witness sets therefore merge across chunks independently of the
// partition.
constexpr std::size_t kFamilies = 3;

// Scan state over integers scaled by a common denominator d <= 2^28 with
// |values * d| <= 2^32. Piece values are carried as num/len fractions with
// len a piece length; the delta numerator is then bounded by
// 3 * 2^62 * 2^56 < 2^120, comfortably inside __int128.
struct FastGrid {
  i64 d = 0;
  std::vector<i64> b, v;

  void value_at(i64 k, i128& num, i64& len) const {
    auto it = std::upper_bound(b.begin(), b.end(), k);
    std::size_t j = static_cast<std::size_t>(it - b.begin());
    i64 a = b[j - 1];
    len = b[j] - a;
    num = static_cast<i128>(v[j - 1]) * len +
          static_cast<i128>(v[j] - v[j - 1]) * (k - a);
  }

  bool is_breakpoint(i64 k) const {
    return std::binary_search(b.begin(), b.end() - 1, k);
  }
};

bool make_fast_grid(const PwlFunction& f, FastGrid& g) {
  constexpr long kDenBound = 1L << 28;
  constexpr long kValBound = 1L << 32;
  mpz_class l(1);
  auto fold = [&](const Rational& r) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.den().get_mpz_t());
    return l <= kDenBound;
  };
  for (const Rational& r : f.breakpoints())
    if (!fold(r)) return false;
  for (const Rational& r : f.values())
    if (!fold(r)) return false;

  g.d = l.get_si();
  Rational rd(static_cast<long>(g.d));
  auto scaled = [&](const Rational& r, i64& out, long bound) {
    mpz_class num = (r * rd).num();
    if (!mpz_fits_slong_p(num.get_mpz_t())) return false;
    long val = num.get_si();
    if (val > bound || val < -bound) return false;
    out = val;
    return true;
  };
  std::size_t n = f.breakpoints().size();
  g.b.resize(n);
  g.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!scaled(f.breakpoints()[i], g.b[i], g.d)) return false;
    if (!scaled(f.values()[i], g.v[i], kValBound)) return false;
  }
  return true;
}

// Shared min/witness bookkeeping. `sign` must be the exact sign of the
// candidate delta; `exact` materializes it only when actually needed.
template <class Exact, class MakePair>
void consider(ChunkOut& out, double& min_approx, int sign, double approx,
              const Exact& exact, const MakePair& make_pair_fn) {
  if (sign < 0) {
    ++out.viol_count;
    out.viol.insert(make_pair_fn());
  }
  if (!out.has_min) {
    out.has_min = true;
    out.min = exact();
    min_approx = out.min.get_d();
    out.arg_count = 1;
    out.arg.items.clear();
    out.arg.insert(make_pair_fn());
    return;
  }
  int ms = sgn(out.min);
  if (sign > ms) return;
  if (sign < ms) {
    out.min = exact();
    min_approx = out.min.get_d();
    out.arg_count = 1;
    out.arg.items.clear();
    out.arg.insert(make_pair_fn());
    return;
  }
  if (sign == 0) {  // both exactly zero
    ++out.arg_count;
    out.arg.insert(make_pair_fn());
    return;
  }
  // Same nonzero sign: cheap reject, exact compare only near the minimum.
  if (approx > min_approx + 1e-6) return;
  mpq_class c = exact();
  int cmp = ::cmp(c, out.min);
  if (cmp < 0) {
    out.min = c;
    min_approx = c.get_d();
    out.arg_count = 1;
    out.arg.items.clear();
    out.arg.insert(make_pair_fn());
  } else if (cmp == 0) {
    ++out.arg_count;
    out.arg.insert(make_pair_fn());
  }
}

ChunkOut scan_fast(const FastGrid& g, std::size_t m, std::size_t lo,
                   std::size_t hi, std::size_t cap) {
  ChunkOut out;
  out.arg.cap = cap;
  out.viol.cap = cap;
  double min_approx = 0.0;
  const i64 d = g.d;
  const double dd = static_cast<double>(d);

  for (std::size_t idx = lo; idx < hi; ++idx) {
    std::size_t fam = idx / (m * m), rem = idx % (m * m);
    std::size_t i = rem / m, k = rem % m;

    i64 x, y;
    i128 n1, n2, n3;
    i64 l1 = 1, l2 = 1, l3 = 1;
    if (fam == 0) {
      x = g.b[i];
      y = g.b[k];
      n1 = g.v[i];
      n2 = g.v[k];
      i64 z = x + y;
      if (z >= d) z -= d;
      g.value_at(z, n3, l3);
    } else if (fam == 1) {
      x = g.b[i];
      y = g.b[k] - x;
      if (y < 0) y += d;
      if (g.is_breakpoint(y)) continue;
      n1 = g.v[i];
      g.value_at(y, n2, l2);
      n3 = g.v[k];
    } else {
      y = g.b[i];
      x = g.b[k] - y;
      if (x < 0) x += d;
      if (g.is_breakpoint(x)) continue;
      g.value_at(x, n1, l1);
      n2 = g.v[i];
      n3 = g.v[k];
    }
    ++out.vertices;

    i128 num = n1 * (static_cast<i128>(l2) * l3) +
               n2 * (static_cast<i128>(l1) * l3) -
               n3 * (static_cast<i128>(l1) * l2);
    int sign = num == 0 ? 0 : (num < 0 ? -1 : 1);
    if (sign > 0 && out.has_min && sgn(out.min) <= 0) continue;

    auto exact = [&] {
      return mpq_from_frac(num, static_cast<i128>(l1) * l2 * l3 * d);
    };
    auto approx = static_cast<double>(num) /
                  (static_cast<double>(l1) * static_cast<double>(l2) *
                   static_cast<double>(l3) * dd);
    auto make_pair_fn = [&] {
      return RPair{Rational(mpq_class(static_cast<long>(x), static_cast<long>(d))),
                   Rational(mpq_class(static_cast<long>(y), static_cast<long>(d)))};
    };
    consider(out, min_approx, sign, approx, exact, make_pair_fn);
  }
  return out;
}

struct GenericGrid {
  const PwlFunction* f = nullptr;
  std::vector<Rational> xs;  // breakpoints mod 1 (final 1 dropped)

  bool is_breakpoint(const Rational& t) const {
    return std::binary_search(xs.begin(), xs.end(), t);
  }
};

ChunkOut scan_generic(const GenericGrid& g, std::size_t lo, std::size_t hi,
                      std::size_t cap) {
  ChunkOut out;
  out.arg.cap = cap;
  out.viol.cap = cap;
  double min_approx = 0.0;
  const std::size_t m = g.xs.size();
  const PwlFunction& f = *g.f;
  const Rational one(1);

  for (std::size_t idx = lo; idx < hi; ++idx) {
    std::size_t fam = idx / (m * m), rem = idx % (m * m);
    std::size_t i = rem / m, k = rem % m;

    Rational x, y, fx, fy, fz;
    if (fam == 0) {
      x = g.xs[i];
      y = g.xs[k];
      fx = f.values()[i];
      fy = f.values()[k];
      Rational z = x + y;
      if (!(z < one)) z -= one;
      fz = f.eval(z);
    } else if (fam == 1) {
      x = g.xs[i];
      y = g.xs[k] - x;
      if (y.sign() < 0) y += one;
      if (g.is_breakpoint(y)) continue;
      fx = f.values()[i];
      fy = f.eval(y);
      fz = f.values()[k];
    } else {
      y = g.xs[i];
      x = g.xs[k] - y;
      if (x.sign() < 0) x += one;
      if (g.is_breakpoint(x)) continue;
      fx = f.eval(x);
      fy = f.values()[i];
      fz = f.values()[k];
    }
    ++out.vertices;

    Rational d = fx + fy - fz;
    int sign = d.sign();
    if (sign > 0 && out.has_min && sgn(out.min) <= 0) continue;

    auto exact = [&] { return d.raw(); };
    auto make_pair_fn = [&] { return RPair{x, y}; };
    consider(out, min_approx, sign, d.to_double(), exact, make_pair_fn);
  }
  return out;
}

struct ScanResult {
  mpq_class min;
  std::vector<RPair> arg, viol;
  unsigned long long arg_count = 0, viol_count = 0, vertices = 0;
};

ScanResult merge_chunks(std::vector<ChunkOut>& chunks, std::size_t cap) {
  ScanResult r;
  bool has = false;
  for (ChunkOut& c : chunks) {
    r.vertices += c.vertices;
    r.viol_count += c.viol_count;
    r.viol.insert(r.viol.end(), c.viol.items.begin(), c.viol.items.end());
    if (!c.has_min) continue;
    if (!has || c.min < r.min) {
      has = true;
      r.min = c.min;
      r.arg = std::move(c.arg.items);
      r.arg_count = c.arg_count;
    } else if (c.min == r.min) {
      r.arg.insert(r.arg.end(), c.arg.items.begin(), c.arg.items.end());
      r.arg_count += c.arg_count;
    }
  }
  auto trim = [&](std::vector<RPair>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() > cap) v.resize(cap);
  };
  trim(r.arg);
  trim(r.viol);
  return r;
}

unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

template <class Scan>
ScanResult run_scan(std::size_t total, unsigned threads, std::size_t cap,
                    const Scan& scan) {
  unsigned t = resolve_threads(threads);
  if (static_cast<std::size_t>(t) > total) t = static_cast<unsigned>(total ? total : 1);
  std::vector<ChunkOut> chunks(t);
  if (t == 1) {
    chunks[0] = scan(0, total);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(t - 1);
    for (unsigned w = 1; w < t; ++w)
      workers.emplace_back([&, w] {
        chunks[w] = scan(total * w / t, total * (w + 1) / t);
      });
    chunks[0] = scan(0, total / t);
    for (auto& th : workers) th.join();
  }
  return merge_chunks(chunks, cap);
}

GenericGrid make_generic_grid(const PwlFunction& f) {
  GenericGrid g;
  g.f = &f;
  g.xs.assign(f.breakpoints().begin(), f.breakpoints().end() - 1);
  return g;
}

Rational count_rational(unsigned long long n) {
  return Rational(static_cast<long>(n));
}

void require_fpoint(const Rational& fpoint) {
  if (!(Rational(0) < fpoint && fpoint < Rational(1)))
    throw Error("fpoint must lie strictly between 0 and 1, got " +
                fpoint.str());
}

void cap_witnesses(VerificationReport& r, std::size_t cap) {
  if (r.witnesses.size() > cap) r.witnesses.resize(cap);
}

}  // namespace

Rational delta(const PwlFunction& f, const Rational& x, const Rational& y) {
  return f.eval(x) + f.eval(y) - f.eval(x + y);
}

std::vector<RPair> additivity_vertices(const PwlFunction& f) {
  GenericGrid g = make_generic_grid(f);
  const std::size_t m = g.xs.size();
  const Rational one(1);
  std::vector<RPair> out;
  out.reserve(kFamilies * m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      out.push_back({g.xs[i], g.xs[k]});
      Rational y = g.xs[k] - g.xs[i];
      if (y.sign() < 0) y += one;
      if (!g.is_breakpoint(y)) out.push_back({g.xs[i], y});
      Rational x = g.xs[k] - g.xs[i];
      if (x.sign() < 0) x += one;
      if (!g.is_breakpoint(x)) out.push_back({x, g.xs[i]});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VerificationReport check_subadditive(const PwlFunction& f,
                                     const CheckOptions& opts) {
  const std::size_t m = f.breakpoints().size() - 1;
  const std::size_t total = kFamilies * m * m;

  ScanResult res;
  FastGrid fast;
  if (!opts.force_generic && make_fast_grid(f, fast)) {
    res = run_scan(total, opts.threads, opts.witness_cap,
                   [&](std::size_t lo, std::size_t hi) {
                     return scan_fast(fast, m, lo, hi, opts.witness_cap);
                   });
  } else {
    GenericGrid g = make_generic_grid(f);
    res = run_scan(total, opts.threads, opts.witness_cap,
                   [&](std::size_t lo, std::size_t hi) {
                     return scan_generic(g, lo, hi, opts.witness_cap);
                   });
  }

  VerificationReport r;
  r.property = Property::Subadditive;
  Rational min_delta{res.min};
  r.holds = min_delta.sign() >= 0;
  r.summary["min_delta"] = min_delta;
  r.summary["vertex_count"] = count_rational(res.vertices);
  r.summary["min_count"] = count_rational(res.arg_count);
  r.summary["violation_count"] = count_rational(res.viol_count);

  const auto& pairs = r.holds ? res.arg : res.viol;
  for (const RPair& p : pairs) {
    Witness w;
    w.kind = WitnessKind::SubadditivityPair;
    w.label = r.holds ? "tight" : "violation";
    w.data = {p.first, p.second};
    w.lhs = f.eval(p.first) + f.eval(p.second);
    w.rhs = f.eval(p.first + p.second);
    r.witnesses.push_back(std::move(w));
  }
  return r;
}

VerificationReport check_symmetric(const PwlFunction& f,
                                   const Rational& fpoint,
                                   const CheckOptions& opts) {
  require_fpoint(fpoint);

  std::vector<Rational> grid;
  grid.reserve(2 * f.breakpoints().size());
  for (auto it = f.breakpoints().begin(); it + 1 != f.breakpoints().end();
       ++it) {
    grid.push_back(*it);
    grid.push_back((fpoint - *it).mod1());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  VerificationReport r;
  r.property = Property::Symmetric;
  r.holds = true;
  Rational max_dev;
  unsigned long long violations = 0;
  const Rational one(1);
  for (const Rational& a : grid) {
    Rational s = f.eval(a) + f.eval(fpoint - a);
    if (s != one) {
      r.holds = false;
      ++violations;
      max_dev = max(max_dev, (s - one).abs());
      if (r.witnesses.size() < opts.witness_cap) {
        Witness w;
        w.kind = WitnessKind::SymmetryPoint;
        w.label = "f(x) + f(fpoint - x) != 1";
        w.data = {a};
        w.lhs = s;
        w.rhs = one;
        r.witnesses.push_back(std::move(w));
      }
    }
  }
  r.summary["checked_points"] = count_rational(grid.size());
  r.summary["violation_count"] = count_rational(violations);
  r.summary["max_abs_deviation"] = max_dev;
  return r;
}

VerificationReport check_minimal(const PwlFunction& f, const Rational& fpoint,
                                 const CheckOptions& opts) {
  require_fpoint(fpoint);

  VerificationReport sub = check_subadditive(f, opts);
  VerificationReport sym = check_symmetric(f, fpoint, opts);

  VerificationReport r;
  r.property = Property::Minimal;
  const Rational zero(0), one(1);
  Rational f0 = f.values().front();
  Rational ffp = f.eval(fpoint);
  bool at_zero = f0 == zero, at_fpoint = ffp == one;
  r.holds = at_zero && at_fpoint && sub.holds && sym.holds;

  if (!at_zero) {
    Witness w;
    w.kind = WitnessKind::ValueBound;
    w.label = "f(0) != 0";
    w.data = {zero};
    w.lhs = f0;
    w.rhs = zero;
    r.witnesses.push_back(std::move(w));
  }
  if (!at_fpoint) {
    Witness w;
    w.kind = WitnessKind::ValueBound;
    w.label = "f(fpoint) != 1";
    w.data = {fpoint};
    w.lhs = ffp;
    w.rhs = one;
    r.witnesses.push_back(std::move(w));
  }
  if (!sub.holds)
    r.witnesses.insert(r.witnesses.end(), sub.witnesses.begin(),
                       sub.witnesses.end());
  if (!sym.holds)
    r.witnesses.insert(r.witnesses.end(), sym.witnesses.begin(),
                       sym.witnesses.end());

  // Minimality forces 0 <= f <= 1; report any breach explicitly even though
  // one of the four conditions must already have failed.
  Rational lo = f.values().front(), hi = lo;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    const Rational& v = f.values()[i];
    lo = min(lo, v);
    hi = max(hi, v);
    if (v < zero || v > one) {
      Witness w;
      w.kind = WitnessKind::ValueBound;
      w.label = "value outside [0, 1]";
      w.data = {f.breakpoints()[i]};
      w.lhs = v;
      w.rhs = v < zero ? zero : one;
      r.witnesses.push_back(std::move(w));
    }
  }
  cap_witnesses(r, opts.witness_cap);

  r.summary["f_at_zero"] = f0;
  r.summary["f_at_fpoint"] = ffp;
  r.summary["min_value"] = lo;
  r.summary["max_value"] = hi;
  r.summary["min_delta"] = sub.summary.at("min_delta");
  r.summary["subadditive"] = Rational(sub.holds ? 1 : 0);
  r.summary["symmetric"] = Rational(sym.holds ? 1 : 0);
  return r;
}

VerificationReport check_two_slope_facet(const PwlFunction& f,
                                         const Rational& fpoint,
                                         const CheckOptions& opts) {
  VerificationReport minimal = check_minimal(f, fpoint, opts);

  VerificationReport r;
  r.property = Property::TwoSlopeFacet;
  std::vector<Rational> sl = f.normalized().distinct_slopes();
  bool two = sl.size() == 2;
  r.holds = minimal.holds && two;

  r.summary["minimal"] = Rational(minimal.holds ? 1 : 0);
  r.summary["slope_count"] = count_rational(sl.size());
  if (!sl.empty()) {
    r.summary["slope_min"] = sl.front();
    r.summary["slope_max"] = sl.back();
  }
  if (!two) {
    Witness w;
    w.kind = WitnessKind::SlopeCount;
    w.label = "distinct slope count != 2";
    w.data = sl;
    w.lhs = count_rational(sl.size());
    w.rhs = Rational(2);
    r.witnesses.push_back(std::move(w));
  }
  if (!minimal.holds)
    r.witnesses.insert(r.witnesses.end(), minimal.witnesses.begin(),
                       minimal.witnesses.end());
  cap_witnesses(r, opts.witness_cap);
  return r;
}

VerificationReport check_valid(const PwlFunction& f, const Rational& fpoint,
                               const CheckOptions& opts) {
  VerificationReport r = check_minimal(f, fpoint, opts);
  r.property = Property::Valid;
  r.summary["via_minimality"] = Rational(1);
  return r;
}

}  // namespace cutfn
