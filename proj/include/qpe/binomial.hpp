#pragma once

#include <utility>
#include <vector>

#include "qpe/precision.hpp"

namespace qpe {

inline constexpr long kMaxBinomialN = 100000;

// Exact C(n, k). Throws std::domain_error outside 0 <= k <= n <= 1e5.
Integer binomial_coeff(long n, long k);

// Index set over measurement counts {0..n}; stored sorted and deduplicated.
class SuccessSet1D {
 public:
  SuccessSet1D(long n, std::vector<long> members);
  static SuccessSet1D full(long n);
  static SuccessSet1D range(long n, long lo, long hi);  // clamped; may be empty

  long n() const { return n_; }
  const std::vector<long>& members() const { return members_; }
  SuccessSet1D complement() const;

 private:
  long n_;
  std::vector<long> members_;
};

// Index set over {0..n}^2 pairs (k_x, k_y).
class SuccessSet2D {
 public:
  SuccessSet2D(long n, std::vector<std::pair<long, long>> members);
  long n() const { return n_; }
  const std::vector<std::pair<long, long>>& members() const { return members_; }

 private:
  long n_;
  std::vector<std::pair<long, long>> members_;
};

// All binomial pmf values B(k; n, p) for k = 0..n, built by upward recurrence.
// Handles p = 0 and p = 1 exactly.
std::vector<Real> binomial_pmf_row(long n, const Real& p);

// Sum of B(k; n, p) over k in [lo, hi] (clamped; 0 if empty after clamping).
Real binomial_range_prob(long n, long lo, long hi, const Real& p);

// Pr(K | n, p) of Eq. over a 1D success set.
Real success_prob_1d(const SuccessSet1D& set, const Real& p);

// Product-binomial probability of a 2D success set.
Real success_prob_2d(const SuccessSet2D& set, const Real& p_x, const Real& p_y);

// Pr(X <= k) for X ~ Binomial(n, p).
Real binom_tail_leq(long n, long k, const Real& p);

}  // namespace qpe
