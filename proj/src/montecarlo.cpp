#include "censorsense/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace censorsense {

namespace {

struct HypothesisTally {
  long all_busy = 0;      // rounds where every node decided busy
  long transmissions = 0; // summed over rounds
};

std::vector<Trit> draw_votes(const NetworkConfig& cfg, const TritProbs& row,
                             SimMode mode, const std::optional<DetectorParams>& det,
                             const std::optional<Thresholds>& thr,
                             Hypothesis hyp, Rng& rng) {
  std::vector<Trit> votes(cfg.m);
  if (mode == SimMode::decision_level) {
    const double to_busy = row.busy;
    const double to_censor = row.busy + row.censor;
    for (int i = 0; i < cfg.m; ++i) {
      const double u = uniform01(rng);
      votes[i] = u < to_busy ? Trit::vote_busy
                             : (u < to_censor ? Trit::censor : Trit::vote_free);
    }
  } else {
    for (int i = 0; i < cfg.m; ++i) {
      votes[i] = local_decide(sample_statistic(hyp, *det, rng), *thr);
    }
  }
  return votes;
}

HypothesisTally run_hypothesis_range(const NetworkConfig& cfg,
                                     const TritProbs& row, SimMode mode,
                                     const std::optional<DetectorParams>& det,
                                     const std::optional<Thresholds>& thr,
                                     Hypothesis hyp, std::uint64_t seed,
                                     long first, long last) {
  HypothesisTally tally;
  const std::uint64_t hyp_tag = hyp == Hypothesis::h1 ? 1 : 0;
  for (long t = first; t < last; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), hyp_tag));
    const std::vector<Trit> votes =
        draw_votes(cfg, row, mode, det, thr, hyp, rng);
    const ConsensusRun run = run_consensus(votes, cfg, rng);
    if (global_and(run.decisions)) ++tally.all_busy;
    tally.transmissions += count_transmissions(votes, cfg.k);
  }
  return tally;
}

HypothesisTally run_hypothesis(const NetworkConfig& cfg, const TritProbs& row,
                               SimMode mode,
                               const std::optional<DetectorParams>& det,
                               const std::optional<Thresholds>& thr,
                               Hypothesis hyp, std::uint64_t seed, long trials,
                               int workers) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  if (workers == 1 || trials < 2L * workers) {
    return run_hypothesis_range(cfg, row, mode, det, thr, hyp, seed, 0, trials);
  }
  // Per-trial sub-streams make the chunking invisible: integer tallies are
  // summed in worker order, and integer addition is exact.
  std::vector<HypothesisTally> parts(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const long chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long first = w * chunk;
    const long last = std::min(trials, first + chunk);
    threads.emplace_back([&, w, first, last] {
      if (first < last) {
        parts[w] = run_hypothesis_range(cfg, row, mode, det, thr, hyp, seed,
                                        first, last);
      }
    });
  }
  for (auto& th : threads) th.join();
  HypothesisTally total;
  for (const auto& part : parts) {
    total.all_busy += part.all_busy;
    total.transmissions += part.transmissions;
  }
  return total;
}

double binomial_se(double phat, long trials) {
  return std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials));
}

}  // namespace

SimEstimate simulate(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                     long trials, std::uint64_t seed, SimMode mode,
                     const std::optional<DetectorParams>& det,
                     const std::optional<Thresholds>& thr, int workers) {
  cfg.validate();
  probs.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (mode == SimMode::signal_level && (!det || !thr)) {
    throw std::invalid_argument(
        "signal_level simulation needs detector parameters and thresholds");
  }

  const HypothesisTally h1 =
      run_hypothesis(cfg, probs.row(Hypothesis::h1), mode, det, thr,
                     Hypothesis::h1, seed, trials, workers);
  const HypothesisTally h0 =
      run_hypothesis(cfg, probs.row(Hypothesis::h0), mode, det, thr,
                     Hypothesis::h0, seed, trials, workers);

  SimEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.p_d = static_cast<double>(h1.all_busy) / trials;
  est.p_fa = static_cast<double>(h0.all_busy) / trials;
  est.p_e = cfg.prior_h0 * est.p_fa + cfg.prior_h1 * (1.0 - est.p_d);
  est.se_pd = binomial_se(est.p_d, trials);
  est.se_pfa = binomial_se(est.p_fa, trials);
  const double per_node = static_cast<double>(cfg.m) * trials;
  // count_transmissions already multiplies by k, so dividing by k gives the
  // talking-node fraction; energy is that fraction (e_unit = 1).
  const double talk_h1 = h1.transmissions / (per_node * cfg.k);
  const double talk_h0 = h0.transmissions / (per_node * cfg.k);
  est.avg_energy = cfg.prior_h0 * talk_h0 + cfg.prior_h1 * talk_h1;
  est.avg_overhead =
      cfg.prior_h0 * (talk_h0 * cfg.k) + cfg.prior_h1 * (talk_h1 * cfg.k);
  return est;
}

ExactMetrics brute_force_exact(int m, int k, double p,
                               const LocalDecisionProbs& probs,
                               TiePolicy tie_policy) {
  if (m < 1 || m > 4 || k < 1 || k > 2) {
    throw std::invalid_argument(
        "brute_force_exact is limited to m <= 4 and k <= 2");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must be in (0, 1]");
  probs.validate();

  NetworkConfig cfg;
  cfg.m = m;
  cfg.p = p;
  cfg.k = k;
  cfg.tie_policy = tie_policy;

  const int pairs = m * (m - 1) / 2;
  const int edge_bits = pairs * k;
  const TritProbs h1 = probs.row(Hypothesis::h1);
  const TritProbs h0 = probs.row(Hypothesis::h0);

  std::vector<Trit> votes(m);
  ExactMetrics out;
  long long n_assign = 1;
  for (int i = 0; i < m; ++i) n_assign *= 3;
  // Ternary counter over initial votes; binary counter over the k
  // edge sets.  Decisions reuse finalize_votes, the simulator's own tail.
  for (long long assign = 0; assign < n_assign; ++assign) {
    long long rest = assign;
    double w1 = 1.0, w0 = 1.0;
    for (int i = 0; i < m; ++i) {
      const int digit = static_cast<int>(rest % 3);
      rest /= 3;
      votes[i] = digit == 0 ? Trit::vote_free
                            : (digit == 1 ? Trit::censor : Trit::vote_busy);
      switch (digit) {
        case 0: w1 *= h1.free; w0 *= h0.free; break;
        case 1: w1 *= h1.censor; w0 *= h0.censor; break;
        default: w1 *= h1.busy; w0 *= h0.busy; break;
      }
    }
    if (w1 == 0.0 && w0 == 0.0) continue;

    double busy_prob = 0.0;  // Pr(all nodes decide busy | this assignment)
    for (long long mask = 0; mask < (1LL << edge_bits); ++mask) {
      double we = 1.0;
      std::vector<long> raw(m, 0);
      int bit = 0;
      for (int step = 0; step < k; ++step) {
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j, ++bit) {
            if (mask & (1LL << bit)) {
              we *= p;
              raw[i] += trit_value(votes[j]);
              raw[j] += trit_value(votes[i]);
            } else {
              we *= 1.0 - p;
            }
          }
        }
      }
      if (we == 0.0) continue;
      const ConsensusRun run = finalize_votes(votes, raw, cfg);
      if (global_and(run.decisions)) busy_prob += we;
    }
    out.p_d += w1 * busy_prob;
    out.p_fa += w0 * busy_prob;
  }
  return out;
}

}  // namespace censorsense
