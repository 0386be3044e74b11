#include "qpe/binomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpe {

Integer binomial_coeff(long n, long k) {
  if (n < 0 || k < 0 || k > n || n > kMaxBinomialN)
    throw std::domain_error("binomial_coeff: need 0 <= k <= n <= 1e5");
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

SuccessSet1D::SuccessSet1D(long n, std::vector<long> members) : n_(n), members_(std::move(members)) {
  if (n < 0) throw std::domain_error("SuccessSet1D: negative n");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && (members_.front() < 0 || members_.back() > n))
    throw std::domain_error("SuccessSet1D: member outside [0, n]");
}

SuccessSet1D SuccessSet1D::full(long n) {
  std::vector<long> m(static_cast<size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) m[static_cast<size_t>(k)] = k;
  return SuccessSet1D(n, std::move(m));
}

SuccessSet1D SuccessSet1D::range(long n, long lo, long hi) {
  lo = std::max(lo, 0L);
  hi = std::min(hi, n);
  std::vector<long> m;
  for (long k = lo; k <= hi; ++k) m.push_back(k);
  return SuccessSet1D(n, std::move(m));
}

SuccessSet1D SuccessSet1D::complement() const {
  std::vector<long> m;
  size_t idx = 0;
  for (long k = 0; k <= n_; ++k) {
    if (idx < members_.size() && members_[idx] == k)
      ++idx;
    else
      m.push_back(k);
  }
  return SuccessSet1D(n_, std::move(m));
}

SuccessSet2D::SuccessSet2D(long n, std::vector<std::pair<long, long>> members)
    : n_(n), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (const auto& [x, y] : members_)
    if (x < 0 || y < 0 || x > n || y > n)
      throw std::domain_error("SuccessSet2D: member outside [0, n]^2");
}

std::vector<Real> binomial_pmf_row(long n, const Real& p) {
  const PrecisionContext ctx = p.context();
  std::vector<Real> row;
  row.reserve(static_cast<size_t>(n) + 1);
  const Real one(1, ctx);
  const Real q = one - p;
  if (p.cmp(0L) == 0 || q.cmp(0L) == 0) {
    long hit = p.cmp(0L) == 0 ? 0 : n;
    for (long k = 0; k <= n; ++k) row.emplace_back(k == hit ? 1 : 0, ctx);
    return row;
  }
  // B(0) = q^n, then B(k+1) = B(k) * (n-k)/(k+1) * p/q
  Real ratio = p / q;
  Real b = pow_ui(q, static_cast<unsigned long>(n));
  for (long k = 0; k <= n; ++k) {
    row.push_back(b);
    if (k < n) b = b * (n - k) / (k + 1) * ratio;
  }
  return row;
}

Real binomial_range_prob(long n, long lo, long hi, const Real& p) {
  const PrecisionContext ctx = p.context();
  lo = std::max(lo, 0L);
  hi = std::min(hi, n);
  if (lo > hi) return Real(0, ctx);
  const Real one(1, ctx);
  const Real q = one - p;
  if (p.cmp(0L) == 0) return Real(lo == 0 ? 1 : 0, ctx);
  if (q.cmp(0L) == 0) return Real(hi == n ? 1 : 0, ctx);

  // start at B(lo) and walk the range by recurrence
  Real b = Real::from_integer(binomial_coeff(n, lo), ctx) *
           pow_ui(p, static_cast<unsigned long>(lo)) *
           pow_ui(q, static_cast<unsigned long>(n - lo));
  Real ratio = p / q;
  Real sum = b;
  for (long k = lo; k < hi; ++k) {
    b = b * (n - k) / (k + 1) * ratio;
    sum += b;
  }
  return sum;
}

Real success_prob_1d(const SuccessSet1D& set, const Real& p) {
  const PrecisionContext ctx = p.context();
  Real sum(0, ctx);
  const auto& m = set.members();
  size_t i = 0;
  while (i < m.size()) {
    size_t j = i;
    while (j + 1 < m.size() && m[j + 1] == m[j] + 1) ++j;
    sum += binomial_range_prob(set.n(), m[i], m[j], p);
    i = j + 1;
  }
  return sum;
}

Real success_prob_2d(const SuccessSet2D& set, const Real& p_x, const Real& p_y) {
  const PrecisionContext ctx = p_x.context();
  const long n = set.n();
  auto row_x = binomial_pmf_row(n, p_x);
  auto row_y = binomial_pmf_row(n, p_y);
  Real sum(0, ctx);
  // members are sorted by (x, y): accumulate per-x runs of consecutive y
  const auto& m = set.members();
  size_t i = 0;
  while (i < m.size()) {
    const long x = m[i].first;
    Real col(0, ctx);
    size_t j = i;
    while (j < m.size() && m[j].first == x) {
      col += row_y[static_cast<size_t>(m[j].second)];
      ++j;
    }
    sum += row_x[static_cast<size_t>(x)] * col;
    i = j;
  }
  return sum;
}

Real binom_tail_leq(long n, long k, const Real& p) {
  if (k < 0 || k > n) throw std::domain_error("binom_tail_leq: need 0 <= k <= n");
  return binomial_range_prob(n, 0, k, p);
}

}  // namespace qpe
