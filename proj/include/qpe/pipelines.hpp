#pragma once

#include <string>
#include <vector>

#include "qpe/schemes.hpp"

namespace qpe {

// Reference-angle representation for the phase shifts between stages: the
// unquantized estimate is either kept exactly or discretized to k bits.
enum class RefMode { kExact, kBits2, kBits3 };

struct StageCount {
  std::string role;   // "box", "wedge", "sign", "majority"
  PiRational angle;   // box/wedge: eta; sign: deviation half-angle
  Rational budget;
  long per_component = 0;
  int components = 1;
  long total() const { return per_component * components; }
};

struct PipelineResult {
  long total = 0;
  std::vector<StageCount> stages;
  std::vector<std::string> flags;
  double rel_margin = 1.0;  // smallest deciding-comparison margin across stages
};

// First-iteration pipelines. The error budget eps is split evenly over the
// determinations: box pipelines count the sine and cosine estimations
// separately (eps/2, eps/3, eps/4 per determination for 1-, 2-, 3-stage),
// while the wedge decides jointly and counts as a single stage (eps, eps/2,
// eps/3).

// 3 * sign_min_n(pi/4, eps/2).
PipelineResult triple_sign_total(const Rational& eps, const PrecisionContext& ctx);
// floor(9 + 6 log2(1/eps)).
long triple_sign_bound(const Rational& eps, const PrecisionContext& ctx);

// 2 * majority_bound_n(eps/2) + sign_min_n(pi/4, eps/2).
PipelineResult majority_sign_total(const Rational& eps, const PrecisionContext& ctx);
// floor(9 + 4 log2(1/eps)).
long majority_sign_bound(const Rational& eps, const PrecisionContext& ctx);

PipelineResult box_pipeline_total(int stages, RefMode ref_mode, const Rational& eps,
                                  const PrecisionContext& ctx);

// 2 * (smallest n with box_joint_worst_error(n, delta(pi/8)) <= eps).
PipelineResult box_joint_pipeline_total(const Rational& eps, const PrecisionContext& ctx);

PipelineResult wedge_pipeline_total(int stages, RefMode ref_mode, const Rational& eps,
                                    const PrecisionContext& ctx);

// Sign-stage deviation half-angles. Exact references leave pi/8 (two-stage)
// and pi/4, pi/8 (three-stage). A k-bit reference rounds the first-stage
// estimate once, adding 2^-(k+1) turns of deviation that halves through the
// later stages: two-stage pi/8 + pi/2^(k+1); three-stage pi/4 + pi/2^(k+1)
// then pi/8 + pi/2^(k+2).
std::vector<PiRational> pipeline_sign_angles(int stages, RefMode ref_mode);

}  // namespace qpe
