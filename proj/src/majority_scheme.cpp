#include <algorithm>
#include <stdexcept>

#include "qpe/schemes.hpp"

namespace qpe {

MajorityLabel majority_quantize(long n_x, long n_y, long n) {
  if (n_x < 0 || n_y < 0 || n_x > n || n_y > n)
    throw std::domain_error("majority_quantize: counts outside [0, n]");
  if (n_x >= std::max(n_y, n - n_y + 1)) return MajorityLabel::k00;
  if (n_y >= std::max(n_x + 1, n - n_x)) return MajorityLabel::k01;
  if (n - n_x >= std::max(n_y + 1, n - n_y)) return MajorityLabel::k10;
  return MajorityLabel::k11;
}

SuccessSet2D majority_success_set(long n, MajoritySetKind kind) {
  std::vector<std::pair<long, long>> members;
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; j <= n; ++j) {
      bool in;
      if (kind == MajoritySetKind::kReduced) {
        in = j >= n - i + 1;
      } else {
        auto q = majority_quantize(i, j, n);
        in = q == MajorityLabel::k00 || q == MajorityLabel::k01;
      }
      if (in) members.emplace_back(i, j);
    }
  }
  return SuccessSet2D(n, std::move(members));
}

Real majority_error(long n, const Real& alpha_radians, MajoritySetKind kind) {
  const PrecisionContext ctx = alpha_radians.context();
  // complement is a per-column prefix [0, m_i]; sum it directly
  std::vector<long> m(static_cast<size_t>(n) + 1, -1);
  if (kind == MajoritySetKind::kReduced) {
    for (long i = 0; i <= n; ++i) m[static_cast<size_t>(i)] = n - i;  // i + j <= n
  } else {
    for (long i = 0; i <= n; ++i) {
      long top = -1;
      for (long j = 0; j <= n; ++j) {
        auto q = majority_quantize(i, j, n);
        if (q == MajorityLabel::k00 || q == MajorityLabel::k01) break;
        top = j;
      }
      m[static_cast<size_t>(i)] = top;
    }
  }
  auto wx = binomial_pmf_row(n, p_from_angle(alpha_radians, Component::kCos));
  auto wy = binomial_pmf_row(n, p_from_angle(alpha_radians, Component::kSin));
  std::vector<Real> pre;
  pre.reserve(wy.size() + 1);
  pre.emplace_back(0, ctx);
  for (const auto& w : wy) pre.push_back(pre.back() + w);
  Real acc(0, ctx);
  for (long i = 0; i <= n; ++i) {
    const long top = m[static_cast<size_t>(i)];
    if (top >= 0) acc += wx[static_cast<size_t>(i)] * pre[static_cast<size_t>(top + 1)];
  }
  return acc;
}

Real majority_error(long n, const PiRational& alpha, MajoritySetKind kind,
                    const PrecisionContext& ctx) {
  return majority_error(n, alpha.radians(ctx), kind);
}

long majority_bound_n(const Rational& eps_bar) {
  if (eps_bar <= 0 || eps_bar > 1) throw std::domain_error("majority_bound_n: eps_bar in (0,1]");
  Rational bound(2);
  long n = 1;
  while (bound / (Integer(1) << n) > eps_bar) {
    ++n;
    if (n > 100000) throw std::runtime_error("majority_bound_n: overflow");
  }
  return n;
}

CountAngle angle_from_counts(long n_x, long n_y, long n, const PrecisionContext& ctx) {
  if (n < 1) throw std::domain_error("angle_from_counts: n >= 1");
  const long dx = 2 * n_x - n, dy = 2 * n_y - n;
  if (dx == 0 && dy == 0) return CountAngle(Real(0, ctx), true);
  const Real two_pi = Real::pi(ctx) * 2L;
  Real a = atan2(Real(dy, ctx), Real(dx, ctx));
  if (a.sign() < 0) a += two_pi;
  return CountAngle(a / two_pi, false);
}

}  // namespace qpe
