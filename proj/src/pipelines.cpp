#include "qpe/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpe {
namespace {

const PiRational kPi8(1, 8);
const PiRational kPi4(1, 4);
const PiRational kPi2(1, 2);

int ref_bits(RefMode mode) {
  switch (mode) {
    case RefMode::kBits2: return 2;
    case RefMode::kBits3: return 3;
    case RefMode::kExact: return 0;
  }
  throw std::logic_error("ref_bits");
}

PiRational stage1_eta(int stages) {
  switch (stages) {
    case 1: return kPi8;  // phi to 1/16 turn, then 3-bit quantization
    case 2: return kPi4;  // 2 phi to 1/8 turn, then 2-bit quantization
    case 3: return kPi2;  // 4 phi to 1/4 turn, then 1-bit quantization
    default: throw std::domain_error("box/wedge pipeline: stages in 1..3");
  }
}

}  // namespace

std::vector<PiRational> pipeline_sign_angles(int stages, RefMode ref_mode) {
  const int k = ref_bits(ref_mode);
  std::vector<PiRational> angles;
  if (stages >= 3) {
    PiRational a = kPi4;
    if (k > 0) a = a + PiRational(1, 1L << (k + 1));
    angles.push_back(a);
  }
  if (stages >= 2) {
    PiRational a = kPi8;
    if (k > 0) a = a + PiRational(1, 1L << (k + (stages == 3 ? 2 : 1)));
    angles.push_back(a);
  }
  return angles;
}

PipelineResult triple_sign_total(const Rational& eps, const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("triple_sign_total: eps in (0,1)");
  const Rational budget = Rational(eps) / 2;
  auto res = sign_min_n(kPi4, budget, ctx);
  PipelineResult out;
  out.stages.push_back({"sign", kPi4, budget, res.n, 3});
  out.total = 3 * res.n;
  out.rel_margin = res.rel_margin;
  return out;
}

long triple_sign_bound(const Rational& eps, const PrecisionContext& ctx) {
  return guarded_floor(
      [&](const PrecisionContext& c) {
        return Real(9, c) + Real(6, c) * log2(Real(Rational(1) / eps, c));
      },
      ctx);
}

PipelineResult majority_sign_total(const Rational& eps, const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("majority_sign_total: eps in (0,1)");
  const Rational budget = Rational(eps) / 2;
  const long m = majority_bound_n(budget);
  const auto sres = sign_min_n(kPi4, budget, ctx);
  PipelineResult out;
  out.stages.push_back({"majority", PiRational(), budget, m, 2});
  out.stages.push_back({"sign", kPi4, budget, sres.n, 1});
  out.total = 2 * m + sres.n;
  Rational maj_margin = (budget - Rational(2) / (Integer(1) << m)) / budget;
  out.rel_margin = std::min(sres.rel_margin, std::abs(maj_margin.get_d()));
  return out;
}

long majority_sign_bound(const Rational& eps, const PrecisionContext& ctx) {
  return guarded_floor(
      [&](const PrecisionContext& c) {
        return Real(9, c) + Real(4, c) * log2(Real(Rational(1) / eps, c));
      },
      ctx);
}

PipelineResult box_pipeline_total(int stages, RefMode ref_mode, const Rational& eps,
                                  const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("box_pipeline_total: eps in (0,1)");
  // eps split evenly over stages, sine and cosine counted separately
  const Rational budget = eps / (stages + 1);
  const PiRational eta = stage1_eta(stages);
  PipelineResult out;
  const Real delta = delta_of_eta(eta, ctx);
  const auto bres = box_min_n(delta, budget, ctx);
  out.stages.push_back({"box", eta, budget, bres.n, 2});
  out.total = 2 * bres.n;
  out.rel_margin = bres.rel_margin;
  for (const PiRational& angle : pipeline_sign_angles(stages, ref_mode)) {
    const auto sres = sign_min_n(angle, budget, ctx);
    out.stages.push_back({"sign", angle, budget, sres.n, 1});
    out.total += sres.n;
    out.rel_margin = std::min(out.rel_margin, sres.rel_margin);
  }
  return out;
}

PipelineResult box_joint_pipeline_total(const Rational& eps, const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("box_joint_pipeline_total: eps in (0,1)");
  const Real delta = delta_of_eta(kPi8, ctx);
  const auto res = box_joint_min_n(delta, eps, ctx);
  PipelineResult out;
  out.stages.push_back({"box-joint", kPi8, eps, res.n, 2});
  out.total = 2 * res.n;
  out.rel_margin = res.rel_margin;
  return out;
}

PipelineResult wedge_pipeline_total(int stages, RefMode ref_mode, const Rational& eps,
                                    const PrecisionContext& ctx) {
  if (eps <= 0 || eps >= 1) throw std::domain_error("wedge_pipeline_total: eps in (0,1)");
  // the wedge decides jointly and counts as a single stage: eps/stages each
  const Rational budget = Rational(eps) / stages;
  const Rational wedge_budget = budget;
  const PiRational eta = stage1_eta(stages);
  PipelineResult out;
  const auto wres = wedge_min_n(eta, wedge_budget, ctx);
  out.stages.push_back({"wedge", eta, wedge_budget, wres.n, 2});
  out.total = 2 * wres.n;
  out.rel_margin = wres.rel_margin;
  for (const PiRational& angle : pipeline_sign_angles(stages, ref_mode)) {
    const auto sres = sign_min_n(angle, budget, ctx);
    out.stages.push_back({"sign", angle, budget, sres.n, 1});
    out.total += sres.n;
    out.rel_margin = std::min(out.rel_margin, sres.rel_margin);
  }
  return out;
}

}  // namespace qpe
