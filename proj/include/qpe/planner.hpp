#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpe/schemes.hpp"

namespace qpe {

// Sampling method for iteration 1 (fixes the three least-significant result bits).
enum class FirstStage { kTripleSign, kMajority };

// Per-determination error budget assignment reconstructed from the tables.
//   kTable3:         eps_bar = eps/k_eps per iteration; first iteration halves.
//   kTable4Sign:     first iteration at eps/2 (m-independent), others at eps/m.
//   kTable4Majority: first iteration at eps/(2m) halves, others at eps/m.
enum class BudgetPolicy { kTable3, kTable4Sign, kTable4Majority };

struct PlanStep {
  int iteration = 0;          // 1-based; iteration k decides bit m+1-k
  std::string role;           // "sign2bit", "majority", "sign"
  PiRational angle;           // sign deviation half-angle
  Rational budget;
  long count = 0;             // samples for this step
  int repeats = 1;            // triple-sign: 3 equal steps; majority: 2 components
  long total() const { return count * repeats; }
};

struct PlanRow {
  Rational eps;
  long k_eps = 0;
  FirstStage first_stage = FirstStage::kTripleSign;
  BudgetPolicy policy = BudgetPolicy::kTable3;
  std::vector<PlanStep> steps;
  long total = 0;
  double rel_margin = 1.0;  // smallest deciding margin across the steps
};

// Smallest k >= 1 with 4^-k <= 12 eps / (k pi^2).
long k_eps_exact(const Rational& eps, const PrecisionContext& ctx);

// ceil((22/43) log2(pi^2/eps)).
long k_eps_bound(const Rational& eps, const PrecisionContext& ctx);

// N_eps: measurements for iterations 1..k_eps-1 with eps_bar = eps/k_eps.
PlanRow n_eps(const Rational& eps, FirstStage first_stage, const PrecisionContext& ctx);

// floor of the closed-form bound with k_eps = k_eps_exact(eps); natural log
// inside, base-2 logs of eps and k. Requires k_eps >= 3.
long n_eps_bound(const Rational& eps, FirstStage first_stage, const PrecisionContext& ctx);

// One cell of the iteration table: nullopt encodes the dash regime m > k_eps.
std::optional<PlanRow> m_table_entry(const Rational& eps, long m, FirstStage first_stage,
                                     const PrecisionContext& ctx);

// m <= k_eps: the table entry; m > k_eps: N_eps plus one measurement for each
// of the remaining m - k_eps + 1 iterations.
long total_measurements(const Rational& eps, long m, FirstStage first_stage,
                        const PrecisionContext& ctx);

// Full per-iteration plan for a simulation run of m iterations, extending the
// table-4 style policy into the single-measurement regime when m > k_eps.
PlanRow simulation_plan(const Rational& eps, long m, FirstStage first_stage,
                        const PrecisionContext& ctx);

struct SingleShotTail {
  Real exact;  // sum_{j=k}^{m} (1 - p_j), p_j = p_x(pi/2^(j+1))
  Real bound;  // (pi^2/12) 4^-k
};
SingleShotTail single_shot_tail(long k, long m, const PrecisionContext& ctx);

}  // namespace qpe
