#pragma once

#include "censorsense/mathkit.hpp"
#include "censorsense/random.hpp"

namespace censorsense {

enum class Hypothesis { h0, h1 };

/// Local vote broadcast by a node: +1 claims the channel is occupied,
/// -1 claims it is free, 0 abstains (the node censors itself).
enum class Trit : int { vote_free = -1, censor = 0, vote_busy = 1 };

inline int trit_value(Trit t) { return static_cast<int>(t); }

/// Energy-detector model.  The test statistic is chi-squared with
/// 2 * time_bandwidth degrees of freedom when the channel is free; when it
/// is busy the instantaneous SNR is exponential with the given mean
/// (Rayleigh fading) and the statistic is noncentral chi-squared.
struct DetectorParams {
  int time_bandwidth = 5;
  double avg_snr_db = 2.0;

  double avg_snr_linear() const;
  void validate() const;
};

enum class ThresholdKind { conventional, censoring };

/// Decision thresholds on the detector statistic.  A conventional rule has a
/// single cut point (lo == hi); a censoring rule abstains on [lo, hi).
class Thresholds {
 public:
  static Thresholds conventional(double eta);
  static Thresholds censoring(double lo, double hi);

  ThresholdKind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  Thresholds(ThresholdKind kind, double lo, double hi)
      : kind_(kind), lo_(lo), hi_(hi) {}

  ThresholdKind kind_;
  double lo_;
  double hi_;
};

/// Distribution of one node's vote under one hypothesis.
struct TritProbs {
  double busy = 0.0;    // Pr(vote +1)
  double censor = 0.0;  // Pr(vote 0)
  double free = 0.0;    // Pr(vote -1)
};

/// Vote distribution under both hypotheses.  Rows sum to one.
struct LocalDecisionProbs {
  Probability p1_h1, p0_h1, pm1_h1;
  Probability p1_h0, p0_h0, pm1_h0;

  TritProbs row(Hypothesis h) const {
    return h == Hypothesis::h1 ? TritProbs{p1_h1, p0_h1, pm1_h1}
                               : TritProbs{p1_h0, p0_h0, pm1_h0};
  }
  void validate() const;
};

/// Pr(statistic >= eta) when the channel is busy, averaged over Rayleigh
/// fading.  Evaluated as a single series of positive terms, which stays
/// accurate down to vanishing SNR where the textbook grouping of the closed
/// form cancels catastrophically.
double prob_exceed_given_h1(double eta, const DetectorParams& det);

/// Pr(statistic >= eta) when the channel is free: the upper tail of a
/// central chi-squared variable with 2 * time_bandwidth degrees of freedom.
double prob_exceed_given_h0(double eta, const DetectorParams& det);

/// Vote distribution induced by the thresholds under both hypotheses.
/// Conventional thresholds yield an exactly zero censor probability.
LocalDecisionProbs local_probs(const Thresholds& thr, const DetectorParams& det);

/// One draw of the detector statistic under the given hypothesis.  Under h1
/// the noncentral statistic is built explicitly as a sum of squared unit
/// Gaussians whose mean vector has squared norm twice the drawn SNR.
double sample_statistic(Hypothesis h, const DetectorParams& det, Rng& rng);

/// Vote implied by a statistic value: +1 if x >= hi, 0 if lo <= x < hi,
/// -1 if x < lo.  Conventional thresholds never return the censor vote.
Trit local_decide(double statistic, const Thresholds& thr);

}  // namespace censorsense
