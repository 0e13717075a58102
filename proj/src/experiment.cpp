#include "censorsense/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "censorsense/montecarlo.hpp"
#include "censorsense/version.hpp"

namespace censorsense {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_seed(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%" PRIu64, seed);
  return buf;
}

/// Opens the output stream: the named file, or stdout for an empty path.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw std::runtime_error("cannot open output file: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

/// Provenance comment lines.  Deliberately excludes the output path and the
/// worker count so reruns of the same experiment are byte-identical.
void write_provenance(std::ostream& os, const char* cmd,
                      const ExperimentConfig& cfg, bool with_thresholds,
                      bool with_sim, bool with_grid) {
  os << "# censorsense v" << k_version << "\n";
  os << "# cmd=" << cmd << " m=" << cfg.m << " k_max=" << cfg.k_max
     << " tb=" << cfg.tb << " p=" << fmt(cfg.p.value_or(0.8))
     << " gbar_db=" << fmt(cfg.gbar_db.value_or(2.0))
     << " prior_h0=" << fmt(cfg.prior_h0)
     << " prior_h1=" << fmt(1.0 - cfg.prior_h0)
     << " tie_policy=" << cfg.tie_policy;
  if (!cfg.scenario.empty()) os << " scenario=" << cfg.scenario;
  if (with_thresholds) {
    if (cfg.eta) os << " eta=" << fmt(*cfg.eta);
    if (cfg.eta0) os << " eta0=" << fmt(*cfg.eta0);
    if (cfg.eta1) os << " eta1=" << fmt(*cfg.eta1);
  }
  if (with_sim) {
    os << " trials=" << cfg.trials << " seed=" << fmt_seed(cfg.seed);
  }
  if (with_grid) {
    os << " grid_lo=" << fmt(cfg.grid.lo) << " grid_hi=" << fmt(cfg.grid.hi)
       << " grid_step=" << fmt(cfg.grid.step);
  }
  os << "\n";
}

TiePolicy parse_tie_policy(const std::string& s) {
  if (s == "one_on_tie") return TiePolicy::one_on_tie;
  if (s == "zero_on_tie") return TiePolicy::zero_on_tie;
  throw ConfigError("unknown tie policy: " + s +
                    " (expected one_on_tie or zero_on_tie)");
}

void check_common(const ExperimentConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  if (cfg.k_max < 1) throw ConfigError("k-max must be >= 1");
  if (cfg.tb < 1) throw ConfigError("tb must be >= 1");
  if (!(cfg.prior_h0 >= 0.0 && cfg.prior_h0 <= 1.0)) {
    throw ConfigError("prior-h0 must lie in [0, 1]");
  }
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  const double p = cfg.p.value_or(0.8);
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must be in (0, 1]");
  parse_tie_policy(cfg.tie_policy);
}

Thresholds conventional_thresholds(const ExperimentConfig& cfg) {
  if (!cfg.eta) throw ConfigError("missing --eta (conventional threshold)");
  try {
    return Thresholds::conventional(*cfg.eta);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

Thresholds censoring_thresholds(const ExperimentConfig& cfg) {
  if (!cfg.eta0 || !cfg.eta1) {
    throw ConfigError("missing --eta0/--eta1 (censoring thresholds)");
  }
  try {
    return Thresholds::censoring(*cfg.eta0, *cfg.eta1);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

NetworkConfig ExperimentConfig::network(int k) const {
  NetworkConfig net;
  net.m = m;
  net.p = p.value_or(0.8);
  net.k = k;
  net.tie_policy = parse_tie_policy(tie_policy);
  net.prior_h0 = prior_h0;
  net.prior_h1 = 1.0 - prior_h0;
  return net;
}

DetectorParams ExperimentConfig::detector() const {
  DetectorParams det;
  det.time_bandwidth = tb;
  det.avg_snr_db = gbar_db.value_or(2.0);
  return det;
}

std::string ExperimentConfig::scenario_label() const {
  return scenario.empty() ? "custom" : scenario;
}

void apply_scenario(ExperimentConfig& cfg) {
  if (cfg.scenario.empty()) return;
  double preset_p = 0.0;
  double preset_gbar = 0.0;
  if (cfg.scenario == "worst") {
    preset_p = 0.2;
    preset_gbar = 2.0;
  } else if (cfg.scenario == "best") {
    preset_p = 0.8;
    preset_gbar = 4.0;
  } else if (cfg.scenario == "normal") {
    preset_p = 0.8;
    preset_gbar = 2.0;
  } else {
    throw ConfigError("unknown scenario: " + cfg.scenario +
                      " (expected worst, best, or normal)");
  }
  if (!cfg.p) cfg.p = preset_p;
  if (!cfg.gbar_db) cfg.gbar_db = preset_gbar;
}

int cmd_local_probs(const ExperimentConfig& cfg) {
  check_common(cfg);
  if (!cfg.eta && !(cfg.eta0 && cfg.eta1)) {
    throw ConfigError(
        "local-probs needs --eta and/or both --eta0 and --eta1");
  }
  const DetectorParams det = cfg.detector();
  std::vector<Thresholds> rows;
  if (cfg.eta) rows.push_back(conventional_thresholds(cfg));
  if (cfg.eta0 && cfg.eta1) rows.push_back(censoring_thresholds(cfg));

  CsvSink sink(cfg.out_path);
  std::ostream& os = sink.stream();
  write_provenance(os, "local-probs", cfg, true, false, false);
  os << "threshold_lo,threshold_hi,pi_1_h1,pi_0_h1,pi_m1_h1,"
        "pi_1_h0,pi_0_h0,pi_m1_h0\n";
  for (const Thresholds& thr : rows) {
    const LocalDecisionProbs probs = local_probs(thr, det);
    os << fmt(thr.lo()) << ',' << fmt(thr.hi()) << ',' << fmt(probs.p1_h1)
       << ',' << fmt(probs.p0_h1) << ',' << fmt(probs.pm1_h1) << ','
       << fmt(probs.p1_h0) << ',' << fmt(probs.p0_h0) << ','
       << fmt(probs.pm1_h0) << '\n';
  }
  return exit_ok;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  check_common(cfg);
  const Thresholds conv = conventional_thresholds(cfg);
  const Thresholds cens = censoring_thresholds(cfg);
  const DetectorParams det = cfg.detector();
  const LocalDecisionProbs probs_conv = local_probs(conv, det);
  const LocalDecisionProbs probs_cens = local_probs(cens, det);

  CsvSink sink(cfg.out_path);
  std::ostream& os = sink.stream();
  write_provenance(os, "sweep", cfg, true, true, false);
  os << "k,system,source,p_d,p_fa,p_e,energy,overhead,se_pd,se_pfa,seed\n";

  const struct {
    const char* name;
    const LocalDecisionProbs& probs;
    std::uint64_t stream;
  } systems[] = {{"conventional", probs_conv, 0}, {"censoring", probs_cens, 1}};

  for (int k = 1; k <= cfg.k_max; ++k) {
    const NetworkConfig net = cfg.network(k);
    for (const auto& sys : systems) {
      const MetricReport a = metric_report(net, sys.probs);
      os << k << ',' << sys.name << ",analytic," << fmt(a.p_d) << ','
         << fmt(a.p_fa) << ',' << fmt(a.p_e) << ',' << fmt(a.avg_energy) << ','
         << fmt(a.avg_overhead) << ",0,0," << fmt_seed(cfg.seed) << '\n';
      const SimEstimate s = simulate(
          net, sys.probs, cfg.trials,
          derive_seed(cfg.seed, static_cast<std::uint64_t>(k), sys.stream),
          SimMode::decision_level, std::nullopt, std::nullopt, cfg.workers);
      os << k << ',' << sys.name << ",simulated," << fmt(s.p_d) << ','
         << fmt(s.p_fa) << ',' << fmt(s.p_e) << ',' << fmt(s.avg_energy) << ','
         << fmt(s.avg_overhead) << ',' << fmt(s.se_pd) << ',' << fmt(s.se_pfa)
         << ',' << fmt_seed(cfg.seed) << '\n';
    }
  }
  return exit_ok;
}

int cmd_optimize(const ExperimentConfig& cfg) {
  check_common(cfg);
  std::vector<ExperimentConfig> runs;
  if (cfg.scenario.empty() && !cfg.p && !cfg.gbar_db) {
    for (const char* name : {"worst", "best", "normal"}) {
      ExperimentConfig run = cfg;
      run.scenario = name;
      apply_scenario(run);
      runs.push_back(run);
    }
  } else {
    runs.push_back(cfg);
  }

  CsvSink sink(cfg.out_path);
  std::ostream& os = sink.stream();
  write_provenance(os, "optimize", cfg, false, false, true);
  os << "scenario,k,system,threshold_lo,threshold_hi,p_d,p_fa,p_e,"
        "energy,overhead,gain_error_pct,gain_energy_pct,gain_overhead_pct\n";

  for (const ExperimentConfig& run : runs) {
    const DetectorParams det = run.detector();
    const std::string label = run.scenario_label();
    for (int k = 1; k <= run.k_max; ++k) {
      const NetworkConfig net = run.network(k);
      const OptResult conv =
          optimize_conventional(net, det, run.grid, 1.0, run.workers);
      const OptResult cens =
          optimize_censoring(net, det, run.grid, 1.0, run.workers);
      const GainReport gains = compute_gains(conv.metrics, cens.metrics);
      const auto row = [&](const char* system, const OptResult& r,
                           const GainReport* g) {
        os << label << ',' << k << ',' << system << ','
           << fmt(r.thresholds.lo()) << ',' << fmt(r.thresholds.hi()) << ','
           << fmt(r.metrics.p_d) << ',' << fmt(r.metrics.p_fa) << ','
           << fmt(r.metrics.p_e) << ',' << fmt(r.metrics.avg_energy) << ','
           << fmt(r.metrics.avg_overhead) << ',';
        if (g) {
          os << fmt(g->error_pct) << ',' << fmt(g->energy_pct) << ','
             << fmt(g->overhead_pct);
        } else {
          os << ",,";
        }
        os << '\n';
      };
      row("conventional", conv, nullptr);
      row("censoring", cens, &gains);
      std::cerr << "optimize " << label << " k=" << k
                << ": conventional p_e=" << fmt(conv.metrics.p_e)
                << " censoring p_e=" << fmt(cens.metrics.p_e)
                << " error gain=" << fmt(gains.error_pct) << "%\n";
    }
  }
  return exit_ok;
}

namespace {

struct CheckList {
  bool all_pass = true;
  void record(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << " — " << detail
              << "\n";
    if (!pass) all_pass = false;
  }
};

LocalDecisionProbs reference_probs() {
  // Moderately asymmetric rows exercising every vote outcome.
  LocalDecisionProbs probs;
  probs.p1_h1 = 0.34;
  probs.p0_h1 = 0.51;
  probs.pm1_h1 = 0.15;
  probs.p1_h0 = 0.15;
  probs.p0_h0 = 0.58;
  probs.pm1_h0 = 0.27;
  return probs;
}

}  // namespace

int cmd_validate(const ExperimentConfig& cfg, bool inject_wrong_variance) {
  check_common(cfg);
  CheckList checks;
  const std::uint64_t seed = cfg.seed;
  ClosedFormOptions opts;
  if (inject_wrong_variance) opts.variance_scale = 4.0;

  // 1. Censoring forms with a collapsed band equal the conventional forms.
  {
    const DetectorParams det{5, 2.0};
    Rng rng(derive_seed(seed, 900, 0));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double eta = 30.0 * uniform01(rng);
      NetworkConfig net;
      net.m = 5 + static_cast<int>(uniform01(rng) * 40);
      net.p = 0.1 + 0.9 * uniform01(rng);
      net.k = 1 + static_cast<int>(uniform01(rng) * 9);
      const LocalDecisionProbs cens =
          local_probs(Thresholds::censoring(eta, eta), det);
      const LocalDecisionProbs conv =
          local_probs(Thresholds::conventional(eta), det);
      worst = std::max(worst, std::fabs(censoring_pd(net, cens) -
                                        conventional_pd(net, conv)));
      worst = std::max(worst, std::fabs(censoring_pfa(net, cens) -
                                        conventional_pfa(net, conv)));
    }
    checks.record("reduction-identity", worst <= 1e-9,
                  "max |censoring(eta,eta) - conventional(eta)| = " +
                      fmt(worst));
  }

  // 2. Monte Carlo agrees with the exhaustive oracle on small networks.
  {
    const LocalDecisionProbs probs = reference_probs();
    double worst_z = 0.0;
    for (const double p : {0.5, 1.0}) {
      for (const int k : {1, 2}) {
        for (const TiePolicy tie :
             {TiePolicy::one_on_tie, TiePolicy::zero_on_tie}) {
          NetworkConfig net;
          net.m = 3;
          net.p = p;
          net.k = k;
          net.tie_policy = tie;
          const ExactMetrics exact = brute_force_exact(3, k, p, probs, tie);
          const SimEstimate sim =
              simulate(net, probs, 100000,
                       derive_seed(seed, 901, (k << 2) + (p == 1.0 ? 2 : 0) +
                                                  (tie == TiePolicy::one_on_tie
                                                       ? 1
                                                       : 0)),
                       SimMode::decision_level, std::nullopt, std::nullopt,
                       cfg.workers);
          const auto zscore = [&](double est, double truth) {
            const double se =
                std::sqrt(std::max(truth * (1.0 - truth), 1e-12) / 100000.0);
            return std::fabs(est - truth) / se;
          };
          worst_z = std::max(worst_z, zscore(sim.p_d, exact.p_d));
          worst_z = std::max(worst_z, zscore(sim.p_fa, exact.p_fa));
        }
      }
    }
    checks.record("simulator-vs-exhaustive", worst_z <= 3.0,
                  "max z-score over m=3 grid = " + fmt(worst_z));
  }

  // 3. With certain connectivity the closed forms are exact.
  {
    const LocalDecisionProbs probs = reference_probs();
    double worst = 0.0;
    for (const int m : {2, 3, 4}) {
      for (const int k : {1, 2}) {
        NetworkConfig net;
        net.m = m;
        net.p = 1.0;
        net.k = k;
        const ExactMetrics exact =
            brute_force_exact(m, k, 1.0, probs, net.tie_policy);
        worst = std::max(worst, std::fabs(censoring_pd(net, probs) - exact.p_d));
        worst =
            std::max(worst, std::fabs(censoring_pfa(net, probs) - exact.p_fa));
      }
    }
    checks.record("exact-at-full-connectivity", worst <= 1e-9,
                  "max |closed form - exhaustive| at p=1 = " + fmt(worst));
  }

  // 4. Closed forms track the simulator at full network size.  The fault
  // hook corrupts the model variance here, which must trip this check.
  {
    NetworkConfig net;
    net.m = 51;
    net.p = 0.8;
    net.k = 3;
    const DetectorParams det{5, 2.0};
    const LocalDecisionProbs probs =
        local_probs(Thresholds::censoring(7.0, 14.6), det);
    const double pd = censoring_pd(net, probs, opts);
    const double pfa = censoring_pfa(net, probs, opts);
    const SimEstimate sim =
        simulate(net, probs, 20000, derive_seed(seed, 902, 0),
                 SimMode::decision_level, std::nullopt, std::nullopt,
                 cfg.workers);
    const double dev =
        std::max(std::fabs(pd - sim.p_d), std::fabs(pfa - sim.p_fa));
    checks.record("closed-form-vs-simulator", dev <= 0.02,
                  "max deviation at m=51 = " + fmt(dev) +
                      (inject_wrong_variance ? " (variance fault injected)"
                                             : ""));
  }

  // 5. The statistic sampler reproduces the closed-form vote probabilities.
  {
    const DetectorParams det{5, 2.0};
    const Thresholds thr = Thresholds::censoring(7.0, 14.6);
    const LocalDecisionProbs probs = local_probs(thr, det);
    const long draws = 200000;
    double worst_z = 0.0;
    for (const Hypothesis hyp : {Hypothesis::h0, Hypothesis::h1}) {
      Rng rng(derive_seed(seed, 903, hyp == Hypothesis::h1 ? 1 : 0));
      long busy = 0, silent = 0, free_votes = 0;
      for (long i = 0; i < draws; ++i) {
        switch (local_decide(sample_statistic(hyp, det, rng), thr)) {
          case Trit::vote_busy: ++busy; break;
          case Trit::censor: ++silent; break;
          case Trit::vote_free: ++free_votes; break;
        }
      }
      const TritProbs row = probs.row(hyp);
      const auto zscore = [&](long count, double truth) {
        const double se =
            std::sqrt(std::max(truth * (1.0 - truth), 1e-12) / draws);
        return std::fabs(static_cast<double>(count) / draws - truth) / se;
      };
      worst_z = std::max(worst_z, zscore(busy, row.busy));
      worst_z = std::max(worst_z, zscore(silent, row.censor));
      worst_z = std::max(worst_z, zscore(free_votes, row.free));
    }
    checks.record("sampler-vs-closed-form", worst_z <= 3.0,
                  "max z-score over vote frequencies = " + fmt(worst_z));
  }

  std::cout << (checks.all_pass ? "validation passed" : "validation FAILED")
            << "\n";
  return checks.all_pass ? exit_ok : exit_validation_failure;
}

}  // namespace censorsense
