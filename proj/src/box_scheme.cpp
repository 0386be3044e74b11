#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpe/schemes.hpp"

namespace qpe {
namespace {

// Nearest integer with guard-band snapping: values within 2^-(bits/2) of an
// integer are treated as exactly that integer.
long snap_long(const Real& v) {
  Real r(v.context());
  mpfr_round(r.raw(), v.raw());
  return mpfr_get_si(r.raw(), MPFR_RNDN);
}

bool near_integer(const Real& v, long& out) {
  Real band = Real::pow2(-(v.bits() / 2), v.context());
  out = snap_long(v);
  return abs(v - Real(out, v.context())).cmp(band) < 0;
}

long ceil_guarded(const Real& v) {
  long snapped;
  if (near_integer(v, snapped)) return snapped;
  Real c(v.context());
  mpfr_ceil(c.raw(), v.raw());
  return mpfr_get_si(c.raw(), MPFR_RNDN);
}

long floor_guarded(const Real& v) {
  long snapped;
  if (near_integer(v, snapped)) return snapped;
  Real f(v.context());
  mpfr_floor(f.raw(), v.raw());
  return mpfr_get_si(f.raw(), MPFR_RNDN);
}

struct Range {
  long lo, hi;  // empty when lo > hi
};

// Interior set of the segment containing p_interior (no grid touch possible).
Range box_range_at(long n, const Real& delta, const Real& p_interior) {
  const Real half = delta / 2L;
  long lo = ceil_guarded((p_interior - half) * n);
  long hi = floor_guarded((p_interior + half) * n);
  return {std::max(lo, 0L), std::min(hi, n)};
}

Real range_error(long n, const Range& r, const Real& p) {
  Real one(1, p.context());
  if (r.lo > r.hi) return one;
  return one - binomial_range_prob(n, r.lo, r.hi, p);
}

// Sorted breakpoints including 0 and 1.
std::vector<Real> sweep_points(long n, const Real& delta, const PrecisionContext& ctx) {
  std::vector<Real> pts = box_breakpoints(n, delta);
  Real zero(0, ctx), one(1, ctx);
  if (pts.empty() || !(pts.front() == zero)) pts.insert(pts.begin(), zero);
  if (!(pts.back() == one)) pts.push_back(one);
  return pts;
}

bool below_convexity_threshold(long n, const Real& delta) {
  // verified when n >= max(1 + 1/delta^2, 3)
  if (n < 3) return true;
  Real lhs = Real(n - 1, delta.context()) * delta * delta;
  return lhs.cmp(1L) < 0;
}

enum class Tri { kExceeds, kWithin, kAmbiguous };

// Does the worst-case error exceed eps_bar? Early-exits on the first definite
// exceed; a probe at the previous witness is tried first.
Tri box_exceeds(long n, const Real& delta, const Rational& eps_bar, const PrecisionContext& ctx,
                const Real* hint) {
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  const Rational one_q(1);
  auto classify = [&](const Real& err) {
    Real margin = err - Real(eps_bar, ctx);
    if (margin.sign() > 0) return abs(margin).cmp(band) >= 0 ? Tri::kExceeds : Tri::kAmbiguous;
    return abs(margin).cmp(band) >= 0 ? Tri::kWithin : Tri::kAmbiguous;
  };
  if (hint) {
    // closed-set point value: a lower bound on the sup
    Real p = *hint;
    if (p.cmp(0L) >= 0 && p.cmp(1L) <= 0) {
      const Real half = delta / 2L;
      Range r{std::max(ceil_guarded((p - half) * n), 0L),
              std::min(floor_guarded((p + half) * n), n)};
      if (classify(range_error(n, r, p)) == Tri::kExceeds) return Tri::kExceeds;
    }
  }
  auto pts = sweep_points(n, delta, ctx);
  bool ambiguous = false;
  const bool grid_scan = below_convexity_threshold(n, delta);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Real mid = (pts[i] + pts[i + 1]) / 2L;
    Range r = box_range_at(n, delta, mid);
    for (const Real* p : {&pts[i], &pts[i + 1]}) {
      switch (classify(range_error(n, r, *p))) {
        case Tri::kExceeds: return Tri::kExceeds;
        case Tri::kAmbiguous: ambiguous = true; break;
        case Tri::kWithin: break;
      }
    }
    if (grid_scan) {
      for (long g = 1; g <= 4 * n + 1; ++g) {
        Real p = pts[i] + (pts[i + 1] - pts[i]) * g / (4 * n + 2);
        switch (classify(range_error(n, r, p))) {
          case Tri::kExceeds: return Tri::kExceeds;
          case Tri::kAmbiguous: ambiguous = true; break;
          case Tri::kWithin: break;
        }
      }
    }
  }
  return ambiguous ? Tri::kAmbiguous : Tri::kWithin;
}

}  // namespace

Real delta_of_eta(const PiRational& eta, const PrecisionContext& ctx) {
  if (eta.coeff < 0 || eta.coeff > Rational(1, 2))
    throw std::domain_error("delta_of_eta: eta in [0, pi/2]");
  return sin(eta.radians(ctx)) / sqrt(Real(2, ctx));
}

SuccessSet1D box_success_set(long n, const Real& delta, const Real& p) {
  if (delta.sign() <= 0) throw std::domain_error("box_success_set: delta > 0");
  const Real half = delta / 2L;
  long lo = ceil_guarded((p - half) * n);
  long hi = floor_guarded((p + half) * n);
  return SuccessSet1D::range(n, lo, hi);
}

std::vector<Real> box_breakpoints(long n, const Real& delta) {
  if (delta.sign() <= 0) throw std::domain_error("box_breakpoints: delta > 0");
  const PrecisionContext ctx = delta.context();
  const Real half = delta / 2L;
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  std::vector<Real> pts;
  for (long k = 0; k <= n; ++k) {
    Real base = Real(k, ctx) / Real(n, ctx);
    for (int s : {-1, 1}) {
      Real v = s < 0 ? base - half : base + half;
      if (v.sign() >= 0 && v.cmp(1L) <= 0) pts.push_back(v);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<Real> out;
  for (auto& v : pts)
    if (out.empty() || (v - out.back()).cmp(band) > 0) out.push_back(v);
  return out;
}

SchemeResult box_worst_error(long n, const Real& delta, const PrecisionContext& ctx) {
  if (delta.sign() <= 0) throw std::domain_error("box_worst_error: delta > 0");
  auto pts = sweep_points(n, delta, ctx);
  SchemeResult best(n, Real(-1, ctx), Real(0, ctx));
  best.convexity_verified = !below_convexity_threshold(n, delta);
  auto consider = [&](const Real& err, const Real& p, LimitSide side) {
    if (err > best.worst_error) {
      best.worst_error = err;
      best.witness = p;
      best.side = side;
    }
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Real mid = (pts[i] + pts[i + 1]) / 2L;
    Range r = box_range_at(n, delta, mid);
    consider(range_error(n, r, pts[i]), pts[i], LimitSide::kAbove);
    consider(range_error(n, r, pts[i + 1]), pts[i + 1], LimitSide::kBelow);
    if (!best.convexity_verified) {
      for (long g = 1; g <= 4 * n + 1; ++g) {
        Real p = pts[i] + (pts[i + 1] - pts[i]) * g / (4 * n + 2);
        consider(range_error(n, r, p), p, LimitSide::kInterior);
      }
    }
  }
  return best;
}

MinSearchResult box_min_n(const Real& delta, const Rational& eps_bar, const PrecisionContext& ctx,
                          bool stability_window) {
  if (delta.sign() <= 0 || delta.cmp(2L) >= 0)
    throw std::domain_error("box_min_n: delta in (0, 2)");
  if (eps_bar <= 0 || eps_bar >= 1) throw std::domain_error("box_min_n: eps_bar in (0,1)");

  MinSearchResult out;
  std::optional<Real> hint;
  auto resolve = [&](long n) {  // full guarded evaluation for ambiguous cases
    GuardInfo gi;
    bool ok = guarded_leq(
        [&](const PrecisionContext& c) {
          return box_worst_error(n, delta.at_precision(c), c).worst_error;
        },
        eps_bar, ctx, &gi);
    out.guard = gi;
    return ok;
  };
  for (long n = 1;; ++n) {
    if (n > kMaxBinomialN) throw std::runtime_error("box_min_n: search exceeded n = 1e5");
    Tri t = box_exceeds(n, delta, eps_bar, ctx, hint ? &*hint : nullptr);
    bool ok = t == Tri::kWithin || (t == Tri::kAmbiguous && resolve(n));
    if (ok) {
      out.n = n;
      Real worst = box_worst_error(n, delta, ctx).worst_error;
      out.rel_margin = std::abs((worst - Real(eps_bar, ctx)).to_double()) / eps_bar.get_d();
      break;
    }
    hint = box_worst_error(n, delta, ctx).witness;
  }
  if (stability_window) {
    for (long n = out.n + 1; n <= out.n + 16; ++n) {
      Tri t = box_exceeds(n, delta, eps_bar, ctx, nullptr);
      bool ok = t == Tri::kWithin || (t == Tri::kAmbiguous && resolve(n));
      if (!ok) out.unstable_above.push_back(n);
    }
  }
  return out;
}

// ------------------------------------------------------------------ joint box

namespace {

// Critical angles in [0, 2pi): solutions of p_x(a) = c or p_y(a) = c over the
// box crossing values c = k/n +- delta/2.
std::vector<Real> joint_sweep_points(long n, const Real& delta, const PrecisionContext& ctx) {
  const Real half = delta / 2L;
  const Real two_pi = Real::pi(ctx) * 2L;
  std::vector<Real> pts;
  pts.push_back(Real(0, ctx));
  for (long k = 0; k <= n; ++k) {
    Real base = Real(k, ctx) / Real(n, ctx);
    for (int s : {-1, 1}) {
      Real c = s < 0 ? base - half : base + half;
      if (c.sign() < 0 || c.cmp(1L) > 0) continue;
      Real t = c * 2L - 1L;
      Real primary(ctx);
      mpfr_acos(primary.raw(), t.raw(), MPFR_RNDN);  // [0, pi]
      pts.push_back(primary);
      pts.push_back(two_pi - primary);
      Real a(ctx);
      mpfr_asin(a.raw(), t.raw(), MPFR_RNDN);  // [-pi/2, pi/2]
      pts.push_back(a.sign() < 0 ? a + two_pi : a);
      pts.push_back(Real::pi(ctx) - a);
    }
  }
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  std::sort(pts.begin(), pts.end());
  std::vector<Real> out;
  for (auto& v : pts)
    if (out.empty() || (v - out.back()).cmp(band) > 0) out.push_back(v);
  if ((two_pi - out.back()).cmp(band) <= 0) out.pop_back();
  out.push_back(two_pi);  // wrap sentinel; same sets as angle 0
  return out;
}

Real joint_error(long n, const Range& rx, const Range& ry, const Real& alpha) {
  Real one(1, alpha.context());
  if (rx.lo > rx.hi || ry.lo > ry.hi) return one;
  Real px = p_from_angle(alpha, Component::kCos);
  Real py = p_from_angle(alpha, Component::kSin);
  return one - binomial_range_prob(n, rx.lo, rx.hi, px) * binomial_range_prob(n, ry.lo, ry.hi, py);
}

template <typename Visit>
void joint_sweep(long n, const Real& delta, const PrecisionContext& ctx, Visit&& visit) {
  auto pts = joint_sweep_points(n, delta, ctx);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Real mid = (pts[i] + pts[i + 1]) / 2L;
    Range rx = box_range_at(n, delta, p_from_angle(mid, Component::kCos));
    Range ry = box_range_at(n, delta, p_from_angle(mid, Component::kSin));
    if (visit(joint_error(n, rx, ry, pts[i]), pts[i], LimitSide::kAbove)) return;
    if (visit(joint_error(n, rx, ry, pts[i + 1]), pts[i + 1], LimitSide::kBelow)) return;
  }
}

}  // namespace

SchemeResult box_joint_worst_error(long n, const Real& delta, const PrecisionContext& ctx) {
  if (delta.sign() <= 0) throw std::domain_error("box_joint_worst_error: delta > 0");
  SchemeResult best(n, Real(-1, ctx), Real(0, ctx));
  joint_sweep(n, delta, ctx, [&](const Real& err, const Real& a, LimitSide side) {
    if (err > best.worst_error) {
      best.worst_error = err;
      best.witness = a;
      best.side = side;
    }
    return false;
  });
  return best;
}

MinSearchResult box_joint_min_n(const Real& delta, const Rational& eps_bar,
                                const PrecisionContext& ctx) {
  if (eps_bar <= 0 || eps_bar >= 1) throw std::domain_error("box_joint_min_n: eps_bar in (0,1)");
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  MinSearchResult out;
  std::optional<Real> hint;
  for (long n = 1;; ++n) {
    if (n > kMaxBinomialN) throw std::runtime_error("box_joint_min_n: search exceeded 1e5");
    bool exceeded = false, ambiguous = false;
    if (hint) {
      Range rx = box_range_at(n, delta, p_from_angle(*hint, Component::kCos));
      Range ry = box_range_at(n, delta, p_from_angle(*hint, Component::kSin));
      Real margin = joint_error(n, rx, ry, *hint) - Real(eps_bar, ctx);
      if (margin.sign() > 0 && abs(margin).cmp(band) >= 0) exceeded = true;
    }
    Real wit(0, ctx), worst(-1, ctx);
    if (!exceeded) {
      joint_sweep(n, delta, ctx, [&](const Real& err, const Real& a, LimitSide) {
        if (err > worst) {
          worst = err;
          wit = a;
        }
        Real margin = err - Real(eps_bar, ctx);
        if (abs(margin).cmp(band) < 0) ambiguous = true;
        exceeded = margin.sign() > 0 && abs(margin).cmp(band) >= 0;
        return exceeded;
      });
    }
    if (!exceeded) {
      bool ok = !ambiguous ||
                guarded_leq(
                    [&](const PrecisionContext& c) {
                      return box_joint_worst_error(n, delta.at_precision(c), c).worst_error;
                    },
                    eps_bar, ctx, &out.guard);
      if (ok) {
        out.n = n;
        Real full = box_joint_worst_error(n, delta, ctx).worst_error;
        out.rel_margin = std::abs((full - Real(eps_bar, ctx)).to_double()) / eps_bar.get_d();
        return out;
      }
    }
    if (worst.sign() >= 0) hint = wit;
  }
}

}  // namespace qpe
