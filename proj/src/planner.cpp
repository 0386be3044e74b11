#include "qpe/planner.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpe {
namespace {

const PiRational kPi4(1, 4);

PiRational iteration_angle(long k) {  // alpha_k = pi/2^(k+1)
  return PiRational(1, 1L << (k + 1));
}

// First-iteration steps under a total first-iteration budget split in halves.
void push_first_iteration(PlanRow& row, const Rational& eps_bar, const PrecisionContext& ctx) {
  const Rational half = Rational(eps_bar) / 2;
  if (row.first_stage == FirstStage::kTripleSign) {
    auto res = sign_min_n(kPi4, half, ctx);
    row.steps.push_back({1, "sign2bit", kPi4, half, res.n, 3});
    row.rel_margin = std::min(row.rel_margin, res.rel_margin);
  } else {
    long nm = majority_bound_n(half);
    row.steps.push_back({1, "majority", PiRational(), half, nm, 2});
    auto res = sign_min_n(kPi4, half, ctx);
    row.steps.push_back({1, "sign", kPi4, half, res.n, 1});
    row.rel_margin = std::min(row.rel_margin, res.rel_margin);
  }
}

void finish(PlanRow& row) {
  row.total = 0;
  for (const auto& s : row.steps) row.total += s.total();
}

}  // namespace

long k_eps_exact(const Rational& eps, const PrecisionContext& ctx) {
  if (eps <= 0 || eps > 1) throw std::domain_error("k_eps_exact: eps in (0,1]");
  for (long k = 1;; ++k) {
    // 4^-k <= 12 eps / (k pi^2)  <=>  k pi^2 4^-k - 12 eps <= 0
    bool ok = guarded_leq(
        [&](const PrecisionContext& c) {
          Real pi2 = Real::pi(c) * Real::pi(c);
          return Real(k, c) * pi2 * Real::pow2(-2 * k, c);
        },
        Rational(12) * eps, ctx);
    if (ok) return k;
    if (k > 4096) throw std::runtime_error("k_eps_exact: no k found");
  }
}

long k_eps_bound(const Rational& eps, const PrecisionContext& ctx) {
  if (eps <= 0 || eps > 1) throw std::domain_error("k_eps_bound: eps in (0,1]");
  return guarded_ceil(
      [&](const PrecisionContext& c) {
        Real pi2 = Real::pi(c) * Real::pi(c);
        return Real(22, c) / 43L * log2(pi2 * Real(Rational(1) / eps, c));
      },
      ctx);
}

PlanRow n_eps(const Rational& eps, FirstStage first_stage, const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("n_eps: eps in (0,1)");
  PlanRow row;
  row.eps = eps;
  row.first_stage = first_stage;
  row.policy = BudgetPolicy::kTable3;
  row.k_eps = k_eps_exact(eps, ctx);
  const Rational eps_bar = Rational(eps) / row.k_eps;
  push_first_iteration(row, eps_bar, ctx);
  for (long k = 2; k <= row.k_eps - 1; ++k) {
    auto res = sign_min_n(iteration_angle(k), eps_bar, ctx);
    row.steps.push_back({static_cast<int>(k), "sign", iteration_angle(k), eps_bar, res.n, 1});
    row.rel_margin = std::min(row.rel_margin, res.rel_margin);
  }
  finish(row);
  return row;
}

long n_eps_bound(const Rational& eps, FirstStage first_stage, const PrecisionContext& ctx) {
  const long k = k_eps_exact(eps, ctx);
  if (k < 3) throw std::domain_error("n_eps_bound: requires k_eps >= 3");
  const long c0 = first_stage == FirstStage::kTripleSign ? 7 : 5;
  return guarded_floor(
      [&](const PrecisionContext& c) {
        Real lg = log2(Real(Rational(1) / eps, c)) + log2(Real(k, c));
        return Real(7 + k, c) + (Real(c0, c) + log(Real(k - 2, c))) * lg;
      },
      ctx);
}

std::optional<PlanRow> m_table_entry(const Rational& eps, long m, FirstStage first_stage,
                                     const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("m_table_entry: eps in (0,1)");
  if (m < 1) throw std::domain_error("m_table_entry: m >= 1");
  const long k_eps = k_eps_exact(eps, ctx);
  if (m > k_eps) return std::nullopt;

  PlanRow row;
  row.eps = eps;
  row.first_stage = first_stage;
  row.k_eps = k_eps;
  const Rational per_iter = Rational(eps) / m;
  if (first_stage == FirstStage::kTripleSign) {
    row.policy = BudgetPolicy::kTable4Sign;
    push_first_iteration(row, eps, ctx);  // eps/2 per step, m-independent
  } else {
    row.policy = BudgetPolicy::kTable4Majority;
    push_first_iteration(row, per_iter, ctx);  // eps/(2m) halves
  }
  for (long k = 2; k <= m; ++k) {
    auto res = sign_min_n(iteration_angle(k), per_iter, ctx);
    row.steps.push_back({static_cast<int>(k), "sign", iteration_angle(k), per_iter, res.n, 1});
    row.rel_margin = std::min(row.rel_margin, res.rel_margin);
  }
  finish(row);
  return row;
}

long total_measurements(const Rational& eps, long m, FirstStage first_stage,
                        const PrecisionContext& ctx) {
  const long k_eps = k_eps_exact(eps, ctx);
  if (m <= k_eps) return m_table_entry(eps, m, first_stage, ctx)->total;
  return n_eps(eps, first_stage, ctx).total + (m - k_eps + 1);
}

PlanRow simulation_plan(const Rational& eps, long m, FirstStage first_stage,
                        const PrecisionContext& ctx) {
  const long k_eps = k_eps_exact(eps, ctx);
  if (m <= k_eps) return *m_table_entry(eps, m, first_stage, ctx);
  PlanRow row = n_eps(eps, first_stage, ctx);
  for (long k = k_eps; k <= m; ++k)
    row.steps.push_back({static_cast<int>(k), "sign", iteration_angle(k), Rational(0), 1, 1});
  finish(row);
  return row;
}

SingleShotTail single_shot_tail(long k, long m, const PrecisionContext& ctx) {
  if (k < 2 || m < k) throw std::domain_error("single_shot_tail: 2 <= k <= m");
  Real exact(0, ctx);
  for (long j = k; j <= m; ++j) {
    // 1 - p_j = (1 - cos(pi/2^(j+1)))/2 = sin^2(pi/2^(j+2))
    Real s = sin(PiRational(1, 1L << (j + 2)).radians(ctx));
    exact += s * s;
  }
  Real pi2 = Real::pi(ctx) * Real::pi(ctx);
  return {exact, pi2 / 12L * Real::pow2(-2 * k, ctx)};
}

}  // namespace qpe
