#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpe/angle.hpp"
#include "qpe/binomial.hpp"
#include "qpe/precision.hpp"

namespace qpe {

// Which one-sided limit realized a worst-case value at a discontinuity.
enum class LimitSide { kBelow, kAbove, kInterior };

// Worst-case error of a (scheme, n, geometry) triple with its witness.
// The witness lives in p-space [0,1] for the box and in radians for the
// angular schemes.
struct SchemeResult {
  long n = 0;
  Real worst_error;
  Real witness;
  LimitSide side = LimitSide::kInterior;
  bool convexity_verified = true;  // box only: n >= max(1 + 1/delta^2, 3)

  SchemeResult(long n_, Real worst, Real wit)
      : n(n_), worst_error(std::move(worst)), witness(std::move(wit)) {}
};

struct MinSearchResult {
  long n = 0;
  std::vector<long> unstable_above;  // failing n in (n, n+16]
  GuardInfo guard;
  double rel_margin = 1.0;  // |worst(n) - eps_bar| / eps_bar of the deciding comparison
};

// ---------------------------------------------------------------- sign scheme

// Probability that the majority over n one-bit measurements misidentifies the
// half-plane when the true angle deviates from 0 (or pi) by alpha. Odd n only.
Real sign_error(long n, const PiRational& alpha, const PrecisionContext& ctx);
Real sign_error(long n, const Real& alpha_radians);

// Smallest odd n with sign_error(n, alpha) <= eps_bar. Upward scan, step 2.
MinSearchResult sign_min_n(const PiRational& alpha, const Rational& eps_bar,
                           const PrecisionContext& ctx, bool stability_window = false);

// Real-valued bound log(1/eps)/log(1/sin(alpha)); callers round up.
Real sign_bound_n(const PiRational& alpha, const Rational& eps_bar, const PrecisionContext& ctx);

// ----------------------------------------------------------------- box scheme

// Theorem mapping from angular accuracy to the per-component estimate
// accuracy: delta(eta) = sin(eta)/sqrt(2).
Real delta_of_eta(const PiRational& eta, const PrecisionContext& ctx);

// K_{n,delta}(p): counts k with (p - delta/2) n <= k <= (p + delta/2) n.
SuccessSet1D box_success_set(long n, const Real& delta, const Real& p);

// Distinct values of k/n +- delta/2 clipped to [0,1], sorted ascending.
std::vector<Real> box_breakpoints(long n, const Real& delta);

// Max over p in [0,1] of 1 - Pr(K_{n,delta}(p)), evaluated as one-sided limits
// at every breakpoint (the adjacent segment's interior set evaluated at the
// breakpoint value). Below the Theorem convexity threshold
// n >= max(1 + 1/delta^2, 3) an additional uniform grid of 4n+1 interior
// points per segment is scanned and the result is flagged unverified.
SchemeResult box_worst_error(long n, const Real& delta, const PrecisionContext& ctx);

// Smallest n with box_worst_error(n, delta) <= eps_bar; upward scan from 1.
MinSearchResult box_min_n(const Real& delta, const Rational& eps_bar, const PrecisionContext& ctx,
                          bool stability_window = false);

// Joint variant: max over alpha of 1 - Pr(K_x(alpha)) Pr(K_y(alpha)) with both
// components' box sets at p_x(alpha), p_y(alpha).
SchemeResult box_joint_worst_error(long n, const Real& delta, const PrecisionContext& ctx);
MinSearchResult box_joint_min_n(const Real& delta, const Rational& eps_bar,
                                const PrecisionContext& ctx);

// --------------------------------------------------------------- wedge scheme

// Acceptance wedge of half-width eta centered on grid point (n/2, n/2).
// The center itself is never a member (relevant for even n).
struct WedgeGeometry {
  long n = 0;
  PiRational eta;

  WedgeGeometry(long n_, PiRational eta_) : n(n_), eta(std::move(eta_)) {
    if (n < 1) throw std::domain_error("WedgeGeometry: n >= 1");
    if (eta.coeff <= 0 || eta.coeff > 1)
      throw std::domain_error("WedgeGeometry: eta in (0, pi]");
  }
};

// Grid points whose direction from the center lies within [alpha-eta, alpha+eta]
// (closed, circular).
SuccessSet2D wedge_success_set(const WedgeGeometry& geom, const Real& alpha_radians);

// Max over alpha of 1 - Pr2(wedge set), evaluated at every critical angle
// atan2(grid point) -+ eta from both one-sided limits.
SchemeResult wedge_worst_error(const WedgeGeometry& geom, const PrecisionContext& ctx);

MinSearchResult wedge_min_n(const PiRational& eta, const Rational& eps_bar,
                            const PrecisionContext& ctx, bool stability_window = false);

// ------------------------------------------------------------ majority scheme

// Two-bit quantization label; value() is the numerator of the quarter turn.
enum class MajorityLabel { k00 = 0, k01 = 1, k10 = 2, k11 = 3 };

// q(n_x, n_y): first matching case in the order .00, .01, .10, else .11.
MajorityLabel majority_quantize(long n_x, long n_y, long n);

enum class MajoritySetKind { kReduced, kFull };

// Reduced set K_n = {(i,j) : j >= n - i + 1}; full set = K_00 union K_01.
SuccessSet2D majority_success_set(long n, MajoritySetKind kind);

// f_n(alpha) = 1 - Pr(set | n, alpha) for alpha in [0, pi/2].
Real majority_error(long n, const Real& alpha_radians, MajoritySetKind kind);
Real majority_error(long n, const PiRational& alpha, MajoritySetKind kind,
                    const PrecisionContext& ctx);

// Smallest n with 2/2^n <= eps_bar (Theorem bound, exact arithmetic).
long majority_bound_n(const Rational& eps_bar);

// Turn of the direction (2 n_x/n - 1, 2 n_y/n - 1); (n/2, n/2) maps to 0.
struct CountAngle {
  Real turn;  // in [0, 1)
  bool degenerate = false;
  CountAngle(Real t, bool d) : turn(std::move(t)), degenerate(d) {}
};
CountAngle angle_from_counts(long n_x, long n_y, long n, const PrecisionContext& ctx);

}  // namespace qpe
