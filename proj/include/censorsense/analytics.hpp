#pragma once

#include <vector>

#include "censorsense/consensus.hpp"
#include "censorsense/sensing.hpp"

namespace censorsense {

/// Numerator of the Gaussian tail argument in the all-busy closed form.
/// vote_sum uses the signed sum of initial votes, which is what the
/// derivation's mean term actually is and what simulation confirms;
/// plus_count substitutes the raw count of +1 votes and is kept only so the
/// variant can be evaluated side by side.
enum class QArgument { vote_sum, plus_count };

struct ClosedFormOptions {
  QArgument q_argument = QArgument::vote_sum;
  /// Multiplies the per-node vote variance.  Exists purely as a fault hook
  /// so validation can prove it detects a wrong variance; leave at 1.
  double variance_scale = 1.0;
};

/// Gaussian (CLT) model of the combined votes for a fixed network
/// configuration.  Construction precomputes, for every pair (censor count c,
/// plus count n), the log of both per-node tail factors, so that grid
/// searches can reevaluate the closed form cheaply as vote probabilities
/// change.  Evaluations are pure: the same inputs give bit-identical
/// results whether or not a context is reused.
class ConsensusCltModel {
 public:
  explicit ConsensusCltModel(const NetworkConfig& cfg,
                             const ClosedFormOptions& opts = {});

  /// Pr(every node decides busy) when each node votes i.i.d. from `row`.
  double all_busy_prob(const TritProbs& row) const;

  const NetworkConfig& config() const { return cfg_; }

 private:
  NetworkConfig cfg_;
  ClosedFormOptions opts_;
  std::vector<double> lgamma_;   // lgamma_[i] = ln(i!)
  std::vector<double> bracket_;  // combined per-(c, n) log tail factors
};

/// Detection probability of the censoring system: all_busy_prob under h1.
double censoring_pd(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                    const ClosedFormOptions& opts = {});

/// False-alarm probability of the censoring system: all_busy_prob under h0.
double censoring_pfa(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                     const ClosedFormOptions& opts = {});

/// Detection probability of the conventional system.  Requires an exactly
/// zero censor probability; evaluates the same model, which then reduces to
/// the two-outcome binomial form.
double conventional_pd(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                       const ClosedFormOptions& opts = {});

/// False-alarm probability of the conventional system (censor prob must be 0).
double conventional_pfa(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                        const ClosedFormOptions& opts = {});

/// Prior-weighted average error probability.
double avg_error(double p_d, double p_fa, double prior_h0, double prior_h1);

/// Average per-node energy spent on transmission: nodes that censor spend
/// nothing, everyone else spends e_unit.  Never exceeds e_unit.
double avg_energy(const LocalDecisionProbs& probs, double prior_h0,
                  double prior_h1, double e_unit);

struct OverheadReport {
  double messages_per_node = 0.0;      // expected transmissions per node
  double expected_censor_count = 0.0;  // expected silent nodes per round
};

/// Expected transmission overhead over k steps plus the expected number of
/// censoring nodes.  messages_per_node never exceeds k.
OverheadReport avg_overhead(const LocalDecisionProbs& probs,
                            const NetworkConfig& cfg);

/// All closed-form metrics for one configuration.
struct MetricReport {
  double p_d = 0.0;
  double p_fa = 0.0;
  double p_e = 0.0;
  double avg_energy = 0.0;
  double avg_overhead = 0.0;
  double expected_censor_count = 0.0;
};

MetricReport metric_report(const NetworkConfig& cfg,
                           const LocalDecisionProbs& probs,
                           double e_unit = 1.0,
                           const ClosedFormOptions& opts = {});

}  // namespace censorsense
