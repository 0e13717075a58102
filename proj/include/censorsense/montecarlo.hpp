#pragma once

#include <cstdint>
#include <optional>

#include "censorsense/analytics.hpp"
#include "censorsense/consensus.hpp"
#include "censorsense/sensing.hpp"

namespace censorsense {

/// How a trial draws the initial votes.
///   decision_level: votes drawn straight from the given probabilities.
///   signal_level:   a detector statistic is sampled and thresholded, which
///                   exercises the statistic model end to end.
enum class SimMode { decision_level, signal_level };

/// Monte Carlo estimates with binomial standard errors.  Energy and
/// overhead are per-node averages mixed over both hypothesis priors.
struct SimEstimate {
  double p_d = 0.0;
  double p_fa = 0.0;
  double p_e = 0.0;
  double se_pd = 0.0;
  double se_pfa = 0.0;
  double avg_energy = 0.0;
  double avg_overhead = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
};

/// Simulates `trials` independent consensus rounds under each hypothesis.
/// Every trial runs on its own sub-stream derived from (seed, trial,
/// hypothesis) and all reductions are integer counts, so the estimate is
/// bit-identical for any worker count (0 = one worker per hardware thread).
/// signal_level mode requires detector parameters and thresholds.
SimEstimate simulate(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                     long trials, std::uint64_t seed,
                     SimMode mode = SimMode::decision_level,
                     const std::optional<DetectorParams>& det = std::nullopt,
                     const std::optional<Thresholds>& thr = std::nullopt,
                     int workers = 0);

/// Exact detection / false-alarm probabilities by full enumeration of every
/// initial-vote assignment and every per-step edge realization.  Cost grows
/// as 3^m * 2^(k m (m-1) / 2); guarded to m <= 4, k <= 2.
struct ExactMetrics {
  double p_d = 0.0;
  double p_fa = 0.0;
};

ExactMetrics brute_force_exact(int m, int k, double p,
                               const LocalDecisionProbs& probs,
                               TiePolicy tie_policy);

}  // namespace censorsense
