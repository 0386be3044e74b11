#pragma once

#include "qpe/angle.hpp"
#include "qpe/binomial.hpp"
#include "qpe/precision.hpp"

namespace qpe {

// Relative entropy D(a || p) in nats. Domain: a, p strictly inside (0, 1).
Real rel_entropy(const Real& a, const Real& p);

struct ChernoffSamples {
  long n = 0;
  bool degenerate = false;  // log(2/eps_bar) <= 0
};

// ceil((2/delta^2) * ln(2/eps_bar)); natural log per Eq. convention.
ChernoffSamples chernoff_sample_bound(const Rational& delta, const Rational& eps_bar,
                                      const PrecisionContext& ctx);

// exp(-n * D(k/n || p)); upper bound on Pr(X <= k). Requires k < n*p.
Real chernoff_tail_bound(long n, long k, const Real& p);

}  // namespace qpe
