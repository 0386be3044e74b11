#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpe/planner.hpp"

namespace qpe {

// xoshiro256** seeded through SplitMix64 from (seed, stream index); every
// trial owns an independent, reproducible substream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  // 53-bit uniform in [0, 1)
  double next_uniform();
  bool bernoulli(double p) { return next_uniform() < p; }

 private:
  std::uint64_t s_[4];
};

// Samples the measurement circuit's outcome distribution at double precision:
// a measurement at index j with shift theta returns 1 with probability
// (1 + cos(2 pi (2^(j-1) phi + theta)))/2.
class MeasurementOracle {
 public:
  MeasurementOracle(double phi_turns, Rng rng) : phi_(phi_turns), rng_(std::move(rng)) {}

  // Count of 1-outcomes among n independent shots.
  long measure(long j, double theta_turns, long n);

  // Deterministic variant: rounds n*p to the nearest integer (noiseless runs).
  long measure_exact(long j, double theta_turns, long n) const;

  long consumed() const { return consumed_; }
  double success_probability(long j, double theta_turns) const;

 private:
  double phi_;
  Rng rng_;
  long consumed_ = 0;
};

// frac(2^(j-1) phi): exact in double arithmetic (doubling drops the top bit).
double shifted_phase(double phi, long j);

// min(|a-b| mod 1, 1 - |a-b| mod 1)
double circular_error_turns(double a, double b);

struct IterationRecord {
  long j = 0;               // bit index decided (classic: stage index)
  long iteration = 0;       // improved: iteration k
  double theta_cos = 0.0;   // shift used for the cosine-type measurement
  long n = 0;               // shots per component
  long count_x = 0;
  long count_y = -1;        // -1 when no sine component was measured
  std::string decided;      // bits fixed by this record
  double omega = -1.0;      // classic: estimated angle before rounding
};

struct Transcript {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string algorithm;  // "classic" | "improved"
  double phi = 0.0;
  long m = 0;
  std::vector<IterationRecord> iterations;
  std::string bits;          // beta'_1 ... beta'_{m+2}
  double estimate = 0.0;     // .bits as a turn
  long total_samples = 0;
  bool consistency_tie = false;  // distance exactly 1/4 resolved toward 0

  std::string to_jsonl() const;
};

// Kitaev's original algorithm: per stage j = m..1 estimate omega_j from
// cosine/sine counts, quantize at j = m, then extend by the consistency rule.
// sample_counts[i] is the per-component shot count for stage j = m - i.
Transcript run_classic(double phi, long m, const std::vector<long>& sample_counts,
                       std::uint64_t seed, std::uint64_t trial, bool noiseless = false);

// Phase-shift improved algorithm driven by a planner row.
Transcript run_improved(double phi, long m, const PlanRow& plan, std::uint64_t seed,
                        std::uint64_t trial, bool noiseless = false);

struct TrialStats {
  long trials = 0;
  long successes = 0;
  Rational eps;
  long m = 0;
  double threshold = 0.0;  // 2^-(m+2)
  double failure_rate = 0.0;
  double ci_low = 0.0;   // exact two-sided 99% binomial bounds on the failure rate
  double ci_high = 0.0;
};

enum class Algorithm { kClassic, kImproved };

struct SimulationConfig {
  long m = 4;
  Rational eps = Rational(1, 10);
  Algorithm algorithm = Algorithm::kImproved;
  FirstStage first_stage = FirstStage::kTripleSign;
  long trials = 10000;
  std::uint64_t seed = 1;
  std::vector<double> fixed_phis;  // empty: uniform random phase per trial
};

TrialStats success_rate(const SimulationConfig& config, const PrecisionContext& ctx,
                        std::vector<Transcript>* transcripts = nullptr);

// Exact two-sided Clopper-Pearson bounds at the given confidence.
std::pair<double, double> binomial_confidence(long failures, long trials, double confidence,
                                              const PrecisionContext& ctx);

}  // namespace qpe
