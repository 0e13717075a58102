#include "censorsense/sensing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace censorsense {

double DetectorParams::avg_snr_linear() const {
  return std::pow(10.0, avg_snr_db / 10.0);
}

void DetectorParams::validate() const {
  if (time_bandwidth < 1) {
    throw std::domain_error("time_bandwidth must be >= 1");
  }
  if (!std::isfinite(avg_snr_db)) {
    throw std::domain_error("avg_snr_db must be finite");
  }
}

namespace {

void check_threshold(double eta, const char* name) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::domain_error(std::string(name) +
                            " must be finite and nonnegative, got " +
                            std::to_string(eta));
  }
}

}  // namespace

Thresholds Thresholds::conventional(double eta) {
  check_threshold(eta, "eta");
  return Thresholds(ThresholdKind::conventional, eta, eta);
}

Thresholds Thresholds::censoring(double lo, double hi) {
  check_threshold(lo, "eta0");
  check_threshold(hi, "eta1");
  if (lo > hi) {
    throw std::domain_error("censoring thresholds require eta0 <= eta1");
  }
  return Thresholds(ThresholdKind::censoring, lo, hi);
}

void LocalDecisionProbs::validate() const {
  constexpr double tol = 1e-9;
  const double s1 = p1_h1 + p0_h1 + pm1_h1;
  const double s0 = p1_h0 + p0_h0 + pm1_h0;
  if (std::fabs(s1 - 1.0) > tol || std::fabs(s0 - 1.0) > tol) {
    throw std::domain_error("vote probabilities must sum to 1 per hypothesis");
  }
}

double prob_exceed_given_h1(double eta, const DetectorParams& det) {
  det.validate();
  check_threshold(eta, "eta");
  const int u = det.time_bandwidth;
  const double x = 0.5 * eta;
  if (x > 650.0) {
    throw std::domain_error("eta too large for stable series evaluation");
  }
  const double gbar = det.avg_snr_linear();
  const double a = gbar / (gbar + 1.0);

  // Exact rearrangement of the Rayleigh-averaged tail:
  //   e^-x * [ sum_{n=0}^{u-2} x^n/n!  +  sum_{j>=0} a^j x^{u-1+j}/(u-1+j)! ]
  // with x = eta/2 and a = gbar/(gbar+1).  All terms are positive, so the
  // evaluation is stable for every SNR, and a -> 0 recovers the central
  // chi-squared tail term by term.
  double head = 0.0;
  double term = 1.0;
  for (int n = 0; n <= u - 2; ++n) {
    head += term;
    term *= x / (n + 1);
  }
  // Entering the tail, term == x^(u-1)/(u-1)!.
  double tail = 0.0;
  for (int j = 0; j < 100000; ++j) {
    tail += term;
    if (term <= (head + tail) * 1e-18) break;
    term *= a * x / (u + j);
  }
  return Probability(std::exp(-x) * (head + tail));
}

double prob_exceed_given_h0(double eta, const DetectorParams& det) {
  det.validate();
  check_threshold(eta, "eta");
  return Probability(1.0 - reg_lower_gamma(det.time_bandwidth, 0.5 * eta));
}

LocalDecisionProbs local_probs(const Thresholds& thr, const DetectorParams& det) {
  LocalDecisionProbs out;
  out.p1_h1 = prob_exceed_given_h1(thr.hi(), det);
  out.p1_h0 = prob_exceed_given_h0(thr.hi(), det);
  if (thr.kind() == ThresholdKind::conventional) {
    out.p0_h1 = 0.0;
    out.p0_h0 = 0.0;
    out.pm1_h1 = 1.0 - out.p1_h1;
    out.pm1_h0 = 1.0 - out.p1_h0;
  } else {
    out.pm1_h1 = 1.0 - prob_exceed_given_h1(thr.lo(), det);
    out.pm1_h0 = 1.0 - prob_exceed_given_h0(thr.lo(), det);
    // Evaluated exactly in this order so that lo == hi collapses to an
    // exact zero and the censoring rule reduces bitwise to the conventional
    // one; the Probability wrapper absorbs negative rounding residue.
    out.p0_h1 = (1.0 - out.p1_h1) - out.pm1_h1;
    out.p0_h0 = (1.0 - out.p1_h0) - out.pm1_h0;
  }
  out.validate();
  return out;
}

double sample_statistic(Hypothesis h, const DetectorParams& det, Rng& rng) {
  det.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  const int dof = 2 * det.time_bandwidth;
  if (h == Hypothesis::h0) {
    double sum = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double z = normal(rng);
      sum += z * z;
    }
    return sum;
  }
  std::exponential_distribution<double> snr(1.0 / det.avg_snr_linear());
  const double gamma = snr(rng);
  // Noncentrality 2*gamma, carried entirely by the first component's mean.
  double sum = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double mean = i == 0 ? std::sqrt(2.0 * gamma) : 0.0;
    const double z = normal(rng) + mean;
    sum += z * z;
  }
  return sum;
}

Trit local_decide(double statistic, const Thresholds& thr) {
  if (statistic >= thr.hi()) return Trit::vote_busy;
  if (thr.kind() == ThresholdKind::censoring && statistic >= thr.lo()) {
    return Trit::censor;
  }
  return Trit::vote_free;
}

}  // namespace censorsense
