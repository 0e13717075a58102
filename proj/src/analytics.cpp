#include "censorsense/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "censorsense/mathkit.hpp"

namespace censorsense {

namespace {

// Terms whose log weight falls below this never move the sums at the 1e-12
// level (at most ~1.4e3 skipped terms of mass < 4.3e-18 each).
constexpr double k_skip_log = -40.0;

double floored_log(double x) {
  return x > 0.0 ? std::max(std::log(x), k_log_prob_floor) : k_log_prob_floor;
}

}  // namespace

ConsensusCltModel::ConsensusCltModel(const NetworkConfig& cfg,
                                     const ClosedFormOptions& opts)
    : cfg_(cfg), opts_(opts) {
  cfg_.validate();
  if (!(opts_.variance_scale > 0.0)) {
    throw std::domain_error("variance_scale must be positive");
  }
  const int m = cfg_.m;
  lgamma_.resize(m + 1);
  for (int i = 0; i <= m; ++i) lgamma_[i] = std::lgamma(i + 1.0);

  // bracket_[c * (m+1) + n] = c * ln Pr(censoring node decides busy)
  //                         + (m-c) * ln Pr(voting node decides busy),
  // where each probability is the Gaussian upper tail of the combined vote
  // with mean equal to the signed vote sum s = 2n + c - m and variance
  // (1-p)(m - own_vote^2 - c) / (p k).  A vanishing variance collapses the
  // tail to the tie-policy indicator.
  bracket_.assign(static_cast<size_t>(m + 1) * (m + 1), 0.0);
  const bool busy_on_tie = cfg_.tie_policy == TiePolicy::one_on_tie;
  auto log_tail = [&](double numerator, int var_count) {
    const double var = (1.0 - cfg_.p) * var_count / (cfg_.p * cfg_.k) *
                       opts_.variance_scale;
    if (var <= 0.0) {
      const bool busy = busy_on_tie ? numerator >= 0.0 : numerator > 0.0;
      return busy ? 0.0 : k_log_prob_floor;
    }
    // Pr(N(mean, var) > 0) = Q(-mean/sigma), evaluated directly so deeply
    // negative means lose no precision before the log.
    return floored_log(gaussian_q(-numerator / std::sqrt(var)));
  };
  for (int c = 0; c <= m; ++c) {
    for (int n = 0; n <= m - c; ++n) {
      const int s = 2 * n + c - m;
      const double num =
          opts_.q_argument == QArgument::vote_sum ? s : static_cast<double>(n);
      double acc = 0.0;
      if (c > 0) acc += c * log_tail(num, m - c);
      if (m - c > 0) acc += (m - c) * log_tail(num, m - 1 - c);
      bracket_[static_cast<size_t>(c) * (m + 1) + n] = acc;
    }
  }
}

double ConsensusCltModel::all_busy_prob(const TritProbs& row) const {
  const int m = cfg_.m;
  const double lp = floored_log(row.busy);
  const double lc = floored_log(row.censor);
  const double lf = floored_log(row.free);
  double total = 0.0;
  for (int c = 0; c <= m; ++c) {
    // A zero-probability vote with a positive exponent contributes nothing;
    // skipping it keeps the censor-free slice bitwise equal to the
    // conventional form.
    if (c > 0 && row.censor == 0.0) break;
    const double base_c = lgamma_[m] - lgamma_[c] + (c > 0 ? c * lc : 0.0);
    const size_t brow = static_cast<size_t>(c) * (m + 1);
    for (int n = 0; n <= m - c; ++n) {
      const int r = m - n - c;
      if ((n > 0 && row.busy == 0.0) || (r > 0 && row.free == 0.0)) continue;
      const double log_weight = base_c - lgamma_[n] - lgamma_[r] +
                                (n > 0 ? n * lp : 0.0) + (r > 0 ? r * lf : 0.0);
      if (log_weight < k_skip_log) continue;
      total += std::exp(log_weight + bracket_[brow + n]);
    }
  }
  return Probability(total);
}

double censoring_pd(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                    const ClosedFormOptions& opts) {
  probs.validate();
  return ConsensusCltModel(cfg, opts).all_busy_prob(probs.row(Hypothesis::h1));
}

double censoring_pfa(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                     const ClosedFormOptions& opts) {
  probs.validate();
  return ConsensusCltModel(cfg, opts).all_busy_prob(probs.row(Hypothesis::h0));
}

namespace {

void require_no_censoring(const LocalDecisionProbs& probs) {
  if (probs.p0_h1.value() != 0.0 || probs.p0_h0.value() != 0.0) {
    throw std::invalid_argument(
        "conventional closed forms require a zero censor probability; "
        "use the censoring forms instead");
  }
}

}  // namespace

double conventional_pd(const NetworkConfig& cfg, const LocalDecisionProbs& probs,
                       const ClosedFormOptions& opts) {
  require_no_censoring(probs);
  return censoring_pd(cfg, probs, opts);
}

double conventional_pfa(const NetworkConfig& cfg,
                        const LocalDecisionProbs& probs,
                        const ClosedFormOptions& opts) {
  require_no_censoring(probs);
  return censoring_pfa(cfg, probs, opts);
}

double avg_error(double p_d, double p_fa, double prior_h0, double prior_h1) {
  return Probability(prior_h0 * Probability(p_fa) +
                     prior_h1 * (1.0 - Probability(p_d)));
}

double avg_energy(const LocalDecisionProbs& probs, double prior_h0,
                  double prior_h1, double e_unit) {
  if (!(e_unit >= 0.0)) throw std::domain_error("e_unit must be nonnegative");
  const double talk_prob =
      prior_h0 * (1.0 - probs.p0_h0) + prior_h1 * (1.0 - probs.p0_h1);
  return Probability(talk_prob) * e_unit;
}

OverheadReport avg_overhead(const LocalDecisionProbs& probs,
                            const NetworkConfig& cfg) {
  cfg.validate();
  const double censor_prob =
      Probability(cfg.prior_h0 * probs.p0_h0 + cfg.prior_h1 * probs.p0_h1);
  OverheadReport out;
  out.messages_per_node = (1.0 - censor_prob) * cfg.k;
  out.expected_censor_count = censor_prob * cfg.m;
  return out;
}

MetricReport metric_report(const NetworkConfig& cfg,
                           const LocalDecisionProbs& probs, double e_unit,
                           const ClosedFormOptions& opts) {
  probs.validate();
  const ConsensusCltModel model(cfg, opts);
  MetricReport out;
  out.p_d = model.all_busy_prob(probs.row(Hypothesis::h1));
  out.p_fa = model.all_busy_prob(probs.row(Hypothesis::h0));
  out.p_e = avg_error(out.p_d, out.p_fa, cfg.prior_h0, cfg.prior_h1);
  out.avg_energy = avg_energy(probs, cfg.prior_h0, cfg.prior_h1, e_unit);
  const OverheadReport oh = avg_overhead(probs, cfg);
  out.avg_overhead = oh.messages_per_node;
  out.expected_censor_count = oh.expected_censor_count;
  return out;
}

}  // namespace censorsense
