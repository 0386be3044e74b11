#include <cmath>
#include <stdexcept>

#include "qpe/schemes.hpp"

namespace qpe {

Real sign_error(long n, const Real& alpha_radians) {
  if (n < 1 || n % 2 == 0)
    throw std::domain_error("sign_error: n must be odd (even n leaves majority ties undecided)");
  Real p = p_from_angle(alpha_radians, Component::kCos);
  return binom_tail_leq(n, (n - 1) / 2, p);
}

Real sign_error(long n, const PiRational& alpha, const PrecisionContext& ctx) {
  return sign_error(n, alpha.radians(ctx));
}

MinSearchResult sign_min_n(const PiRational& alpha, const Rational& eps_bar,
                           const PrecisionContext& ctx, bool stability_window) {
  if (alpha.coeff <= 0 || alpha.coeff >= Rational(1, 2))
    throw std::domain_error("sign_min_n: alpha must lie in (0, pi/2)");
  if (eps_bar <= 0 || eps_bar >= 1) throw std::domain_error("sign_min_n: eps_bar in (0,1)");

  MinSearchResult out;
  for (long n = 1;; n += 2) {
    if (n > kMaxBinomialN) throw std::runtime_error("sign_min_n: search exceeded n = 1e5");
    GuardInfo gi;
    bool ok = guarded_leq(
        [&](const PrecisionContext& c) { return sign_error(n, alpha, c); }, eps_bar, ctx, &gi);
    if (ok) {
      out.n = n;
      out.guard = gi;
      out.rel_margin = std::abs(gi.margin) / eps_bar.get_d();
      break;
    }
  }
  if (stability_window) {
    for (long n = out.n + 2; n <= out.n + 16; n += 2) {
      bool ok = guarded_leq(
          [&](const PrecisionContext& c) { return sign_error(n, alpha, c); }, eps_bar, ctx);
      if (!ok) out.unstable_above.push_back(n);
    }
  }
  return out;
}

Real sign_bound_n(const PiRational& alpha, const Rational& eps_bar, const PrecisionContext& ctx) {
  if (alpha.coeff <= 0 || alpha.coeff >= Rational(1, 2))
    throw std::domain_error("sign_bound_n: alpha must lie in (0, pi/2)");
  Real s = sin(alpha.radians(ctx));
  return log(Real(Rational(1) / eps_bar, ctx)) / log(Real(1, ctx) / s);
}

}  // namespace qpe
