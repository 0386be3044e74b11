#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qpe/schemes.hpp"

namespace qpe {
namespace {

Real circ_dist(const Real& a, const Real& b, const Real& two_pi) {
  Real d = abs(a - b);
  while (d > two_pi) d -= two_pi;
  Real pi_v = two_pi / 2L;
  if (d > pi_v) d = two_pi - d;
  return d;
}

struct GridPoint {
  long i, j;
  Real psi;  // direction from the center, in [0, 2pi)
};

std::vector<GridPoint> grid_directions(long n, const PrecisionContext& ctx) {
  const Real two_pi = Real::pi(ctx) * 2L;
  std::vector<GridPoint> pts;
  pts.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; j <= n; ++j) {
      const long dx = 2 * i - n, dy = 2 * j - n;
      if (dx == 0 && dy == 0) continue;  // center excluded (even n)
      Real psi = atan2(Real(dy, ctx), Real(dx, ctx));
      if (psi.sign() < 0) psi += two_pi;
      pts.push_back({i, j, std::move(psi)});
    }
  }
  return pts;
}

// Per-column membership. Columns are contiguous for eta <= pi/2 (the wedge is
// convex); a std::set keeps bookkeeping safe across coincident events.
struct SweepState {
  std::vector<std::set<long>> cols;

  explicit SweepState(long n) : cols(static_cast<size_t>(n) + 1) {}

  Real error_at(long n, const std::vector<Real>& wx, const std::vector<Real>& pre_y,
                const PrecisionContext& ctx) const {
    Real acc(0, ctx);
    for (long i = 0; i <= n; ++i) {
      const auto& c = cols[static_cast<size_t>(i)];
      if (c.empty()) continue;
      const long lo = *c.begin(), hi = *c.rbegin();
      acc += wx[static_cast<size_t>(i)] *
             (pre_y[static_cast<size_t>(hi + 1)] - pre_y[static_cast<size_t>(lo)]);
    }
    return Real(1, ctx) - acc;
  }
};

std::vector<Real> prefix_sums(const std::vector<Real>& row, const PrecisionContext& ctx) {
  std::vector<Real> pre;
  pre.reserve(row.size() + 1);
  pre.emplace_back(0, ctx);
  for (const auto& w : row) pre.push_back(pre.back() + w);
  return pre;
}

struct Event {
  size_t point;
  bool enter;
  Real angle;
};

// Visit(err, alpha, side) -> true to stop. Evaluates both one-sided limits at
// every critical angle; the set between critical angles is maintained
// incrementally.
template <typename Visit>
void wedge_sweep(const WedgeGeometry& geom, const PrecisionContext& ctx, Visit&& visit) {
  if (geom.eta.coeff > Rational(1, 2))
    throw std::domain_error("wedge sweep requires eta <= pi/2");
  const long n = geom.n;
  const Real two_pi = Real::pi(ctx) * 2L;
  const Real eta = geom.eta.radians(ctx);
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);

  auto pts = grid_directions(n, ctx);
  std::vector<Event> events;
  events.reserve(pts.size() * 2);
  for (size_t idx = 0; idx < pts.size(); ++idx) {
    for (bool enter : {true, false}) {
      Real a = enter ? pts[idx].psi - eta : pts[idx].psi + eta;
      if (a.sign() < 0) a += two_pi;
      if (a >= two_pi) a -= two_pi;
      events.push_back({idx, enter, std::move(a)});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.angle < b.angle; });

  // initial membership at the midpoint of the wrap-around segment
  Real a0 = (events.back().angle + events.front().angle + two_pi) / 2L;
  if (a0 >= two_pi) a0 -= two_pi;
  SweepState state(n);
  for (const auto& p : pts)
    if (circ_dist(p.psi, a0, two_pi) <= eta) state.cols[static_cast<size_t>(p.i)].insert(p.j);

  size_t g = 0;
  while (g < events.size()) {
    size_t h = g + 1;
    while (h < events.size() && (events[h].angle - events[g].angle).cmp(band) <= 0) ++h;
    const Real& alpha = events[g].angle;
    auto wx = binomial_pmf_row(n, p_from_angle(alpha, Component::kCos));
    auto pre_y = prefix_sums(binomial_pmf_row(n, p_from_angle(alpha, Component::kSin)), ctx);
    if (visit(state.error_at(n, wx, pre_y, ctx), alpha, LimitSide::kBelow)) return;
    for (size_t e = g; e < h; ++e) {
      const auto& p = pts[events[e].point];
      auto& col = state.cols[static_cast<size_t>(p.i)];
      if (events[e].enter)
        col.insert(p.j);
      else
        col.erase(p.j);
    }
    if (visit(state.error_at(n, wx, pre_y, ctx), alpha, LimitSide::kAbove)) return;
    g = h;
  }
}

// Directions sorted by angle for fast closed-set point probes.
struct ProbeIndex {
  long n;
  std::vector<GridPoint> pts;  // sorted by psi
  Real two_pi;

  ProbeIndex(long n_, const PrecisionContext& ctx)
      : n(n_), pts(grid_directions(n_, ctx)), two_pi(Real::pi(ctx) * 2L) {
    std::sort(pts.begin(), pts.end(),
              [](const GridPoint& a, const GridPoint& b) { return a.psi < b.psi; });
  }

  // Closed-set error at an arbitrary angle: a lower bound on the sup.
  Real point_error(const Real& alpha, const Real& eta, const PrecisionContext& ctx) const {
    auto wx = binomial_pmf_row(n, p_from_angle(alpha, Component::kCos));
    auto wy = binomial_pmf_row(n, p_from_angle(alpha, Component::kSin));
    Real lo = alpha - eta, hi = alpha + eta;
    Real acc(0, ctx);
    auto add_range = [&](Real a, Real b) {  // psi in [a, b], a,b within [0, 2pi)
      auto first = std::lower_bound(pts.begin(), pts.end(), a,
                                    [](const GridPoint& p, const Real& v) { return p.psi < v; });
      for (auto it = first; it != pts.end() && it->psi <= b; ++it)
        acc += wx[static_cast<size_t>(it->i)] * wy[static_cast<size_t>(it->j)];
    };
    Real zero(0, ctx);
    if (lo.sign() < 0) {
      add_range(lo + two_pi, two_pi);
      add_range(zero, hi);
    } else if (hi >= two_pi) {
      add_range(lo, two_pi);
      add_range(zero, hi - two_pi);
    } else {
      add_range(lo, hi);
    }
    return Real(1, ctx) - acc;
  }
};

}  // namespace

SuccessSet2D wedge_success_set(const WedgeGeometry& geom, const Real& alpha_radians) {
  const PrecisionContext ctx = alpha_radians.context();
  const Real two_pi = Real::pi(ctx) * 2L;
  const Real eta = geom.eta.radians(ctx);
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  std::vector<std::pair<long, long>> members;
  for (const auto& p : grid_directions(geom.n, ctx)) {
    // closed membership with guard-band snapping at exact touches
    if ((circ_dist(p.psi, alpha_radians, two_pi) - eta).cmp(band) <= 0)
      members.emplace_back(p.i, p.j);
  }
  return SuccessSet2D(geom.n, std::move(members));
}

SchemeResult wedge_worst_error(const WedgeGeometry& geom, const PrecisionContext& ctx) {
  SchemeResult best(geom.n, Real(-1, ctx), Real(0, ctx));
  wedge_sweep(geom, ctx, [&](const Real& err, const Real& alpha, LimitSide side) {
    if (err > best.worst_error) {
      best.worst_error = err;
      best.witness = alpha;
      best.side = side;
    }
    return false;
  });
  return best;
}

MinSearchResult wedge_min_n(const PiRational& eta, const Rational& eps_bar,
                            const PrecisionContext& ctx, bool stability_window) {
  if (eta.coeff <= 0 || eta.coeff > Rational(1, 2))
    throw std::domain_error("wedge_min_n: eta in (0, pi/2]");
  if (eps_bar <= 0 || eps_bar >= 1) throw std::domain_error("wedge_min_n: eps_bar in (0,1)");
  const Real band = Real::pow2(-(ctx.bits() / 2), ctx);
  const Real threshold(eps_bar, ctx);

  MinSearchResult out;
  std::optional<Real> hint;
  auto definite_exceed = [&](const Real& err) {
    Real margin = err - threshold;
    return margin.sign() > 0 && abs(margin).cmp(band) >= 0;
  };
  // probes are closed-set point values (lower bounds): sound for rejection
  auto probe_rejects = [&](long n, const Real& eta_r) {
    ProbeIndex index(n, ctx);
    if (hint && definite_exceed(index.point_error(*hint, eta_r, ctx))) return true;
    const int kCoarse = 32;
    const Real two_pi = Real::pi(ctx) * 2L;
    for (int t = 0; t < kCoarse; ++t) {
      Real a = two_pi * (2 * t + 1) / (2 * kCoarse);
      if (definite_exceed(index.point_error(a, eta_r, ctx))) return true;
    }
    return false;
  };
  auto sweep_exceeds = [&](long n, bool use_probes, bool* ambiguous,
                           std::optional<Real>* next_hint) {
    const Real eta_r = eta.radians(ctx);
    if (use_probes && probe_rejects(n, eta_r)) return true;
    bool exceeded = false;
    Real worst(-1, ctx), wit(0, ctx);
    wedge_sweep(WedgeGeometry(n, eta), ctx, [&](const Real& err, const Real& alpha, LimitSide) {
      if (err > worst) {
        worst = err;
        wit = alpha;
      }
      Real margin = err - threshold;
      if (ambiguous && abs(margin).cmp(band) < 0) *ambiguous = true;
      exceeded = definite_exceed(err);
      return exceeded;
    });
    if (next_hint && worst.sign() >= 0) *next_hint = wit;
    return exceeded;
  };
  auto resolve = [&](long n) {
    return guarded_leq(
        [&](const PrecisionContext& c) {
          return wedge_worst_error(WedgeGeometry(n, eta), c).worst_error;
        },
        eps_bar, ctx, &out.guard);
  };
  for (long n = 1;; ++n) {
    if (n > kMaxBinomialN) throw std::runtime_error("wedge_min_n: search exceeded n = 1e5");
    bool ambiguous = false;
    std::optional<Real> next_hint;
    if (!sweep_exceeds(n, true, &ambiguous, &next_hint)) {
      if (!ambiguous || resolve(n)) {
        out.n = n;
        Real worst = wedge_worst_error(WedgeGeometry(n, eta), ctx).worst_error;
        out.rel_margin = std::abs((worst - threshold).to_double()) / eps_bar.get_d();
        break;
      }
    }
    if (next_hint) hint = *next_hint;
  }
  if (stability_window) {
    for (long n = out.n + 1; n <= out.n + 16; ++n) {
      bool ambiguous = false;
      if (sweep_exceeds(n, false, &ambiguous, nullptr) || (ambiguous && !resolve(n)))
        out.unstable_above.push_back(n);
    }
  }
  return out;
}

}  // namespace qpe
