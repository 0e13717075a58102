#include "censorsense/analytics.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using namespace censorsense;

namespace {

NetworkConfig make_cfg(int m, double p, int k,
                       TiePolicy tie = TiePolicy::one_on_tie) {
  NetworkConfig cfg;
  cfg.m = m;
  cfg.p = p;
  cfg.k = k;
  cfg.tie_policy = tie;
  return cfg;
}

// Vote distributions of the reference censoring detector (time-bandwidth 5,
// average SNR 2 dB, thresholds 7.0 / 14.6), frozen so the closed form can be
// compared against an external evaluation that consumed these exact numbers.
LocalDecisionProbs reference_censoring_probs() {
  LocalDecisionProbs probs;
  probs.p1_h1 = 0.3419457213511225;
  probs.p0_h1 = 0.5055091002811107;
  probs.pm1_h1 = 0.1525451783677667;
  probs.p1_h0 = 0.14733985104574468;
  probs.p0_h0 = 0.5781051022638597;
  probs.pm1_h0 = 0.27455504669039565;
  return probs;
}

const DetectorParams det_ref{5, 2.0};

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("certain votes at full connectivity give indicator results") {
  const auto cfg = make_cfg(7, 1.0, 2);
  ConsensusCltModel model(cfg);
  CHECK(model.all_busy_prob({1.0, 0.0, 0.0}) == 1.0);
  CHECK(model.all_busy_prob({0.0, 0.0, 1.0}) < 1e-250);
  // Everyone silent lands the combined vote exactly on zero.
  CHECK(model.all_busy_prob({0.0, 1.0, 0.0}) == 1.0);
  ConsensusCltModel strict(make_cfg(7, 1.0, 2, TiePolicy::zero_on_tie));
  CHECK(strict.all_busy_prob({0.0, 1.0, 0.0}) == 0.0);
}

TEST_CASE("full-connectivity model matches trinomial enumeration") {
  // At p == 1 the Gaussian tails collapse to indicators and the model must
  // reproduce the exact trinomial sum over unanimous-decision vote counts.
  const TritProbs rows[] = {
      {0.3, 0.2, 0.5}, {0.6, 0.0, 0.4}, {0.2, 0.7, 0.1}, {0.45, 0.1, 0.45}};
  for (const int m : {3, 5, 8}) {
    for (const bool busy_on_tie : {true, false}) {
      ConsensusCltModel model(make_cfg(
          m, 1.0, 1,
          busy_on_tie ? TiePolicy::one_on_tie : TiePolicy::zero_on_tie));
      for (const TritProbs& row : rows) {
        const double want = oracle::all_busy_at_full_connectivity(
            m, row.busy, row.censor, row.free, busy_on_tie);
        CHECK(std::fabs(model.all_busy_prob(row) - want) <= 1e-9);
      }
    }
  }
}

TEST_CASE("CLT closed form matches an independent evaluation") {
  // Frozen from a separate implementation of the same closed form (different
  // language and numerics: direct powers, library normal tail, no log-space
  // pruning).  Agreement is checked well below the pruning error budget.
  const LocalDecisionProbs probs = reference_censoring_probs();
  const struct {
    int k;
    double pd, pfa;
  } anchors[] = {
      {1, 0.79840674529146183, 0.006785434583281986},
      {5, 0.92981880224575009, 0.028387249783156113},
  };
  for (const auto& a : anchors) {
    const auto cfg = make_cfg(51, 0.8, a.k);
    CHECK(std::fabs(censoring_pd(cfg, probs) - a.pd) <= 1e-10);
    CHECK(std::fabs(censoring_pfa(cfg, probs) - a.pfa) <= 1e-10);
  }
}

TEST_CASE("average error falls as broadcast steps are added") {
  const LocalDecisionProbs probs = reference_censoring_probs();
  double prev = 1.0;
  for (int k = 1; k <= 10; ++k) {
    const auto cfg = make_cfg(51, 0.8, k);
    const double pe = avg_error(censoring_pd(cfg, probs),
                                censoring_pfa(cfg, probs), 0.5, 0.5);
    CHECK(pe < prev);
    prev = pe;
  }
}

TEST_CASE("conventional forms equal the censoring forms on the no-censor slice") {
  const auto cfg = make_cfg(51, 0.8, 2);
  for (const double eta : {7.0, 10.3, 14.6}) {
    const LocalDecisionProbs conv =
        local_probs(Thresholds::conventional(eta), det_ref);
    const LocalDecisionProbs collapsed =
        local_probs(Thresholds::censoring(eta, eta), det_ref);
    // Bitwise: same code path, so not merely close.
    CHECK(conventional_pd(cfg, conv) == censoring_pd(cfg, conv));
    CHECK(conventional_pfa(cfg, conv) == censoring_pfa(cfg, conv));
    CHECK(conventional_pd(cfg, conv) == censoring_pd(cfg, collapsed));
    CHECK(conventional_pfa(cfg, conv) == censoring_pfa(cfg, collapsed));
  }
  CHECK_THROWS_AS(conventional_pd(cfg, reference_censoring_probs()),
                  std::invalid_argument);
  CHECK_THROWS_AS(conventional_pfa(cfg, reference_censoring_probs()),
                  std::invalid_argument);
}

TEST_CASE("error, energy, and overhead arithmetic") {
  CHECK(avg_error(0.9, 0.2, 0.5, 0.5) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(avg_error(0.9, 0.2, 0.7, 0.3) == doctest::Approx(0.17).epsilon(1e-12));
  CHECK(avg_error(1.0, 0.0, 0.5, 0.5) == 0.0);
  CHECK(avg_error(0.0, 1.0, 0.5, 0.5) == 1.0);

  LocalDecisionProbs probs;
  probs.p1_h1 = 0.3;
  probs.p0_h1 = 0.5;
  probs.pm1_h1 = 0.2;
  probs.p1_h0 = 0.1;
  probs.p0_h0 = 0.6;
  probs.pm1_h0 = 0.3;
  CHECK(avg_energy(probs, 0.5, 0.5, 2.0) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK_THROWS_AS(avg_energy(probs, 0.5, 0.5, -1.0), std::domain_error);

  auto cfg = make_cfg(20, 0.8, 4);
  const OverheadReport oh = avg_overhead(probs, cfg);
  CHECK(oh.messages_per_node == doctest::Approx(0.45 * 4).epsilon(1e-12));
  CHECK(oh.expected_censor_count == doctest::Approx(0.55 * 20).epsilon(1e-12));
}

TEST_CASE("energy and overhead respect their hard ceilings") {
  const auto cfg = make_cfg(51, 0.8, 5);
  for (double lo = 0.0; lo <= 20.0; lo += 2.5) {
    for (double hi = lo; hi <= 25.0; hi += 2.5) {
      const LocalDecisionProbs probs =
          local_probs(Thresholds::censoring(lo, hi), det_ref);
      const double e = avg_energy(probs, cfg.prior_h0, cfg.prior_h1, 1.5);
      const OverheadReport oh = avg_overhead(probs, cfg);
      CHECK(e >= 0.0);
      CHECK(e <= 1.5);
      CHECK(oh.messages_per_node >= 0.0);
      CHECK(oh.messages_per_node <= cfg.k);
      CHECK(oh.expected_censor_count >= 0.0);
      CHECK(oh.expected_censor_count <= cfg.m);
    }
  }
}

TEST_CASE("metric_report mirrors the standalone metrics bitwise") {
  const auto cfg = make_cfg(51, 0.8, 3);
  const LocalDecisionProbs probs = reference_censoring_probs();
  const MetricReport rep = metric_report(cfg, probs, 1.0);
  CHECK(rep.p_d == censoring_pd(cfg, probs));
  CHECK(rep.p_fa == censoring_pfa(cfg, probs));
  CHECK(rep.p_e == avg_error(rep.p_d, rep.p_fa, cfg.prior_h0, cfg.prior_h1));
  CHECK(rep.avg_energy ==
        avg_energy(probs, cfg.prior_h0, cfg.prior_h1, 1.0));
  const OverheadReport oh = avg_overhead(probs, cfg);
  CHECK(rep.avg_overhead == oh.messages_per_node);
  CHECK(rep.expected_censor_count == oh.expected_censor_count);
}

TEST_CASE("tail-argument variants and the variance fault hook are live") {
  const auto cfg = make_cfg(51, 0.8, 1);
  const LocalDecisionProbs probs = reference_censoring_probs();
  const double base = censoring_pd(cfg, probs);

  ClosedFormOptions plus;
  plus.q_argument = QArgument::plus_count;
  CHECK(std::fabs(censoring_pd(cfg, probs, plus) - base) > 0.05);

  ClosedFormOptions wide;
  wide.variance_scale = 4.0;
  CHECK(std::fabs(censoring_pd(cfg, probs, wide) - base) > 0.05);

  ClosedFormOptions bad;
  bad.variance_scale = 0.0;
  CHECK_THROWS_AS(ConsensusCltModel(cfg, bad), std::domain_error);
}

}  // TEST_SUITE
