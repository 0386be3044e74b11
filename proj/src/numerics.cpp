#include "qpe/numerics.hpp"

#include <stdexcept>

namespace qpe {

Real rel_entropy(const Real& a, const Real& p) {
  if (a.cmp(0L) <= 0 || a.cmp(1L) >= 0 || p.cmp(0L) <= 0 || p.cmp(1L) >= 0)
    throw std::domain_error("rel_entropy: arguments must lie strictly in (0,1)");
  const Real one(1, a.context());
  return a * log(a / p) + (one - a) * log((one - a) / (one - p));
}

ChernoffSamples chernoff_sample_bound(const Rational& delta, const Rational& eps_bar,
                                      const PrecisionContext& ctx) {
  if (delta <= 0 || delta > 1) throw std::domain_error("chernoff_sample_bound: delta in (0,1]");
  if (eps_bar <= 0) throw std::domain_error("chernoff_sample_bound: eps_bar > 0 required");
  ChernoffSamples out;
  if (eps_bar >= 2) {  // log term non-positive
    out.degenerate = true;
    return out;
  }
  auto eval = [&](const PrecisionContext& c) {
    Real d(delta, c);
    return Real(2, c) / (d * d) * log(Real(Rational(2) / eps_bar, c));
  };
  out.n = guarded_ceil(eval, ctx);
  if (out.n <= 0) {
    out.n = 0;
    out.degenerate = true;
  }
  return out;
}

Real chernoff_tail_bound(long n, long k, const Real& p) {
  const PrecisionContext ctx = p.context();
  if ((Real(k, ctx) - Real(n, ctx) * p).sign() >= 0)
    throw std::domain_error("chernoff_tail_bound: requires k < n*p");
  Real a = Real(k, ctx) / Real(n, ctx);
  if (a.cmp(0L) == 0) {
    // D(0 || p) = log(1/(1-p))
    Real one(1, ctx);
    return exp(Real(n, ctx) * log(one - p));
  }
  return exp(-(Real(n, ctx) * rel_entropy(a, p)));
}

}  // namespace qpe
