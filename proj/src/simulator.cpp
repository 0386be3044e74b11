#include "qpe/simulator.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace qpe {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double shifted_phase(double phi, long j) {
  double x = phi;
  for (long i = 1; i < j; ++i) {
    x *= 2;
    if (x >= 1) x -= 1;
  }
  return x;
}

double circular_error_turns(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return d <= 0.5 ? d : 1.0 - d;
}

double MeasurementOracle::success_probability(long j, double theta_turns) const {
  double angle = shifted_phase(phi_, j) + theta_turns;
  return (1.0 + std::cos(kTwoPi * angle)) / 2.0;
}

long MeasurementOracle::measure(long j, double theta_turns, long n) {
  const double p = success_probability(j, theta_turns);
  long ones = 0;
  for (long i = 0; i < n; ++i) ones += rng_.bernoulli(p) ? 1 : 0;
  consumed_ += n;
  return ones;
}

long MeasurementOracle::measure_exact(long j, double theta_turns, long n) const {
  return static_cast<long>(std::floor(success_probability(j, theta_turns) * n + 0.5));
}

namespace {

double bits_value(const std::vector<int>& bits) {  // .b1 b2 ... as a turn
  double v = 0;
  for (size_t i = bits.size(); i > 0; --i) v = (v + bits[i - 1]) / 2;
  return v;
}

std::string bits_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

Transcript run_classic(double phi, long m, const std::vector<long>& sample_counts,
                       std::uint64_t seed, std::uint64_t trial, bool noiseless) {
  if (m < 1) throw std::domain_error("run_classic: m >= 1");
  if (static_cast<long>(sample_counts.size()) != m)
    throw std::domain_error("run_classic: need one sample count per stage");

  Transcript t;
  t.seed = seed;
  t.trial = trial;
  t.algorithm = "classic";
  t.phi = phi;
  t.m = m;
  MeasurementOracle oracle(phi, Rng(seed, trial));
  std::vector<int> bits(static_cast<size_t>(m) + 2, 0);

  for (long j = m; j >= 1; --j) {
    const long n = sample_counts[static_cast<size_t>(m - j)];
    IterationRecord rec;
    rec.j = j;
    rec.iteration = m - j + 1;
    rec.theta_cos = 0.0;
    rec.n = n;
    rec.count_x = noiseless ? oracle.measure_exact(j, 0.0, n) : oracle.measure(j, 0.0, n);
    rec.count_y = noiseless ? oracle.measure_exact(j, -0.25, n) : oracle.measure(j, -0.25, n);
    const double cx = 2.0 * rec.count_x / n - 1.0;
    const double sy = 2.0 * rec.count_y / n - 1.0;
    double omega = (cx == 0.0 && sy == 0.0) ? 0.0 : std::atan2(sy, cx) / kTwoPi;
    if (omega < 0) omega += 1.0;
    rec.omega = omega;
    if (j == m) {
      // round to the nearest 1/8 modulo 1
      long q = static_cast<long>(std::floor(omega * 8 + 0.5)) & 7;
      bits[static_cast<size_t>(m - 1)] = static_cast<int>((q >> 2) & 1);
      bits[static_cast<size_t>(m)] = static_cast<int>((q >> 1) & 1);
      bits[static_cast<size_t>(m + 1)] = static_cast<int>(q & 1);
      rec.decided = bits_string({bits[m - 1], bits[m], bits[m + 1]});
    } else {
      // consistency rule against .0 b_{j+1} b_{j+2}
      const double tail =
          bits[static_cast<size_t>(j)] / 4.0 + bits[static_cast<size_t>(j + 1)] / 8.0;
      const double d0 = circular_error_turns(tail, omega);
      const double d1 = circular_error_turns(tail + 0.5, omega);
      int bit;
      if (d0 < 0.25) {
        bit = 0;
        if (d0 == 0.25) t.consistency_tie = true;
      } else if (d1 < 0.25) {
        bit = 1;
      } else {  // exactly 1/4 from both candidates: resolve toward 0
        bit = 0;
        t.consistency_tie = true;
      }
      bits[static_cast<size_t>(j - 1)] = bit;
      rec.decided = bit ? "1" : "0";
    }
    t.iterations.push_back(rec);
  }
  t.bits = bits_string(bits);
  t.estimate = bits_value(bits);
  t.total_samples = noiseless ? 0 : oracle.consumed();
  return t;
}

namespace {

// two-bit quantization from the signs of cos / sin of the pi/4-shifted angle
std::pair<int, int> quadrant_bits(bool cos_positive, bool sin_positive) {
  if (cos_positive && sin_positive) return {0, 0};
  if (!cos_positive && sin_positive) return {0, 1};
  if (!cos_positive && !sin_positive) return {1, 0};
  return {1, 1};
}

}  // namespace

Transcript run_improved(double phi, long m, const PlanRow& plan, std::uint64_t seed,
                        std::uint64_t trial, bool noiseless) {
  if (m < 1) throw std::domain_error("run_improved: m >= 1");
  Transcript t;
  t.seed = seed;
  t.trial = trial;
  t.algorithm = "improved";
  t.phi = phi;
  t.m = m;
  MeasurementOracle oracle(phi, Rng(seed, trial));
  std::vector<int> bits(static_cast<size_t>(m) + 2, 0);
  auto sample = [&](long j, double theta, long n) {
    return noiseless ? oracle.measure_exact(j, theta, n) : oracle.measure(j, theta, n);
  };

  // iteration 1: fix bits m, m+1, m+2 (indices m-1, m, m+1)
  size_t step = 0;
  long third_count = 0;
  if (plan.first_stage == FirstStage::kTripleSign) {
    const long n = plan.steps[step].count;
    IterationRecord rec;
    rec.j = m + 1;
    rec.iteration = 1;
    rec.theta_cos = 0.125;
    rec.n = n;
    rec.count_x = sample(m + 1, 0.125, n);    // sign of cos(2 pi (phi_{m+1} + 1/8))
    rec.count_y = sample(m + 1, -0.125, n);   // sign of sin via cos(x - pi/2)
    auto [b1, b2] = quadrant_bits(2 * rec.count_x > n, 2 * rec.count_y > n);
    bits[static_cast<size_t>(m)] = b1;
    bits[static_cast<size_t>(m + 1)] = b2;
    rec.decided = bits_string({b1, b2});
    t.iterations.push_back(rec);
    third_count = n;
    step += 1;
  } else {
    const long n = plan.steps[step].count;
    IterationRecord rec;
    rec.j = m + 1;
    rec.iteration = 1;
    rec.theta_cos = 0.0;
    rec.n = n;
    rec.count_x = sample(m + 1, 0.0, n);
    rec.count_y = sample(m + 1, -0.25, n);
    auto label = majority_quantize(rec.count_x, rec.count_y, n);
    bits[static_cast<size_t>(m)] = (static_cast<int>(label) >> 1) & 1;
    bits[static_cast<size_t>(m + 1)] = static_cast<int>(label) & 1;
    rec.decided = bits_string({bits[m], bits[m + 1]});
    t.iterations.push_back(rec);
    step += 1;
    third_count = plan.steps[step].count;
    step += 1;
  }

  // remaining bit of iteration 1 plus iterations k = 2..m: sign of the cosine
  // of the angle shifted by all known bits
  for (long k = 1; k <= m; ++k) {
    const long j = m + 1 - k;
    long n;
    if (k == 1) {
      n = third_count;
    } else {
      if (step >= plan.steps.size() || plan.steps[step].iteration != static_cast<int>(k))
        throw std::logic_error("run_improved: plan is missing iteration " + std::to_string(k));
      n = plan.steps[step].count;
      ++step;
    }
    double ref = 0;  // .0 b_{j+1} ... b_{m+2}
    for (size_t idx = static_cast<size_t>(m) + 2; idx > static_cast<size_t>(j); --idx)
      ref = (ref + bits[idx - 1]) / 2;
    ref /= 2;
    IterationRecord rec;
    rec.j = j;
    rec.iteration = k == 1 ? 1 : k;
    rec.theta_cos = -ref;
    rec.n = n;
    rec.count_x = sample(j, -ref, n);
    const int bit = 2 * rec.count_x > n ? 0 : 1;  // majority 1 => shifted angle near 0
    bits[static_cast<size_t>(j - 1)] = bit;
    rec.decided = bit ? "1" : "0";
    t.iterations.push_back(rec);
  }

  t.bits = bits_string(bits);
  t.estimate = bits_value(bits);
  t.total_samples = noiseless ? 0 : oracle.consumed();
  if (!noiseless && t.total_samples != plan.total)
    throw std::logic_error("run_improved: consumed samples diverge from the plan");
  return t;
}

std::string Transcript::to_jsonl() const {
  nlohmann::json j;
  j["schema"] = "qpe-transcript-v1";
  j["seed"] = seed;
  j["trial"] = trial;
  j["algorithm"] = algorithm;
  j["phi"] = phi;
  j["m"] = m;
  j["bits"] = bits;
  j["estimate"] = estimate;
  j["total_samples"] = total_samples;
  j["error"] = circular_error_turns(estimate, phi);
  j["consistency_tie"] = consistency_tie;
  auto& iters = j["iterations"] = nlohmann::json::array();
  for (const auto& r : iterations) {
    iters.push_back({{"j", r.j},
                     {"k", r.iteration},
                     {"theta", r.theta_cos},
                     {"n", r.n},
                     {"count_x", r.count_x},
                     {"count_y", r.count_y},
                     {"decided", r.decided}});
  }
  return j.dump();
}

std::pair<double, double> binomial_confidence(long failures, long trials, double confidence,
                                              const PrecisionContext& ctx) {
  const double alpha = 1.0 - confidence;
  auto cdf_at = [&](long k, double p) {
    return binom_tail_leq(trials, k, Real::from_double(p, ctx)).to_double();
  };
  auto bisect = [&](auto f, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
      double mid = (lo + hi) / 2;
      (f(mid) ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
  };
  double lower = 0.0, upper = 1.0;
  if (failures > 0)  // largest p with Pr(X >= f) <= alpha/2
    lower = bisect([&](double p) { return 1.0 - cdf_at(failures - 1, p) <= alpha / 2; }, 0.0, 1.0);
  if (failures < trials)  // smallest p with Pr(X <= f) <= alpha/2
    upper = bisect([&](double p) { return cdf_at(failures, p) > alpha / 2; }, 0.0, 1.0);
  return {lower, upper};
}

TrialStats success_rate(const SimulationConfig& config, const PrecisionContext& ctx,
                        std::vector<Transcript>* transcripts) {
  if (config.trials < 1) throw std::domain_error("success_rate: trials >= 1");
  TrialStats stats;
  stats.trials = config.trials;
  stats.eps = config.eps;
  stats.m = config.m;
  stats.threshold = std::ldexp(1.0, static_cast<int>(-(config.m + 2)));

  std::vector<long> classic_counts;
  PlanRow plan;
  if (config.algorithm == Algorithm::kClassic) {
    auto chernoff = chernoff_sample_bound(Rational(1, 8), config.eps / (2 * config.m), ctx);
    classic_counts.assign(static_cast<size_t>(config.m), chernoff.n);
  } else {
    plan = simulation_plan(config.eps, config.m, config.first_stage, ctx);
  }

  for (long i = 0; i < config.trials; ++i) {
    const std::uint64_t run_stream = static_cast<std::uint64_t>(i) * 2;
    double phi;
    if (config.fixed_phis.empty()) {
      Rng phi_rng(config.seed, run_stream + 1);
      phi = phi_rng.next_uniform();
    } else {
      phi = config.fixed_phis[static_cast<size_t>(i) % config.fixed_phis.size()];
    }
    Transcript t = config.algorithm == Algorithm::kClassic
                       ? run_classic(phi, config.m, classic_counts, config.seed, run_stream)
                       : run_improved(phi, config.m, plan, config.seed, run_stream);
    if (circular_error_turns(t.estimate, phi) <= stats.threshold) ++stats.successes;
    if (transcripts) transcripts->push_back(std::move(t));
  }
  const long failures = stats.trials - stats.successes;
  stats.failure_rate = static_cast<double>(failures) / stats.trials;
  auto [lo, hi] = binomial_confidence(failures, stats.trials, 0.99, ctx);
  stats.ci_low = lo;
  stats.ci_high = hi;
  return stats;
}

}  // namespace qpe
