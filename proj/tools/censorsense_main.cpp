#include <CLI11.hpp>

#include <iostream>

#include "censorsense/experiment.hpp"
#include "censorsense/version.hpp"

namespace {

using censorsense::ExperimentConfig;

/// Registers the shared experiment flags on one subcommand.
void add_common_options(CLI::App& sub, ExperimentConfig& cfg) {
  sub.set_config("--config", "", "Read defaults from a key=value file");
  sub.add_option("--m", cfg.m, "Number of nodes")->capture_default_str();
  sub.add_option("--p", cfg.p, "Link probability per pair per step (0, 1]");
  sub.add_option("--k-max", cfg.k_max, "Largest consensus step count")
      ->capture_default_str();
  sub.add_option("--tb", cfg.tb, "Detector time-bandwidth product")
      ->capture_default_str();
  sub.add_option("--gbar-db", cfg.gbar_db, "Mean SNR under h1, in dB");
  sub.add_option("--prior-h0", cfg.prior_h0, "Prior probability of h0")
      ->capture_default_str();
  sub.add_option("--trials", cfg.trials, "Monte Carlo trials per point")
      ->capture_default_str();
  sub.add_option("--seed", cfg.seed, "Master random seed")
      ->envname("CENSORSENSE_SEED")
      ->capture_default_str();
  sub.add_option("--tie-policy", cfg.tie_policy,
                 "Decision on a combined vote of zero")
      ->check(CLI::IsMember({"one_on_tie", "zero_on_tie"}))
      ->capture_default_str();
  sub.add_option("--scenario", cfg.scenario,
                 "Preset network conditions: worst, best, or normal")
      ->check(CLI::IsMember({"worst", "best", "normal"}));
  sub.add_option("--eta", cfg.eta, "Conventional decision threshold");
  sub.add_option("--eta0", cfg.eta0, "Censoring lower threshold");
  sub.add_option("--eta1", cfg.eta1, "Censoring upper threshold");
  sub.add_option("--grid-lo", cfg.grid.lo, "Grid lower bound")
      ->capture_default_str();
  sub.add_option("--grid-hi", cfg.grid.hi, "Grid upper bound")
      ->capture_default_str();
  sub.add_option("--grid-step", cfg.grid.step, "Grid step")
      ->capture_default_str();
  sub.add_option("--out", cfg.out_path, "Output CSV path (default: stdout)");
  sub.add_option("--workers", cfg.workers,
                 "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Censoring-enabled cooperative spectrum sensing over "
               "consensus: closed forms, simulation, and threshold search"};
  app.set_version_flag("--version", censorsense::k_version);
  app.require_subcommand(1);

  ExperimentConfig cfg;
  bool inject_wrong_variance = false;

  CLI::App* local_probs = app.add_subcommand(
      "local-probs", "Vote probabilities for configured thresholds");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Closed-form and simulated metrics across step counts");
  CLI::App* optimize = app.add_subcommand(
      "optimize", "Grid-search thresholds minimizing average error");
  CLI::App* validate = app.add_subcommand(
      "validate", "Cross-check closed forms, simulator, and oracles");
  for (CLI::App* sub : {local_probs, sweep, optimize, validate}) {
    add_common_options(*sub, cfg);
  }
  // Fault hook for proving the validation can fail; hidden from help.
  validate->add_flag("--inject-wrong-variance", inject_wrong_variance)
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : censorsense::exit_config_error;
  }

  try {
    censorsense::apply_scenario(cfg);
    if (local_probs->parsed()) return censorsense::cmd_local_probs(cfg);
    if (sweep->parsed()) return censorsense::cmd_sweep(cfg);
    if (optimize->parsed()) return censorsense::cmd_optimize(cfg);
    return censorsense::cmd_validate(cfg, inject_wrong_variance);
  } catch (const censorsense::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return censorsense::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return censorsense::exit_runtime_error;
  }
}
