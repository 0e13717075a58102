#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "censorsense/consensus.hpp"
#include "censorsense/optimizer.hpp"
#include "censorsense/sensing.hpp"

namespace censorsense {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_runtime_error = 3,
  exit_validation_failure = 4,
};

/// Bad or missing user input; the driver maps it to exit_config_error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything the subcommands accept.  Scenario presets fill p and the mean
/// SNR only where the user did not set them explicitly.
struct ExperimentConfig {
  int m = 51;
  int k_max = 10;
  int tb = 5;
  double prior_h0 = 0.5;
  long trials = 20000;
  std::uint64_t seed = 1;
  std::string tie_policy = "one_on_tie";
  std::string scenario;  // "", "worst", "best", or "normal"
  std::optional<double> p;
  std::optional<double> gbar_db;
  std::optional<double> eta;   // conventional threshold
  std::optional<double> eta0;  // censoring band
  std::optional<double> eta1;
  GridSpec grid;
  std::string out_path;  // empty writes CSV to stdout
  int workers = 0;

  /// Effective network parameters for a given step count.
  NetworkConfig network(int k) const;
  DetectorParams detector() const;
  /// Label for the optimize CSV: the preset name, or "custom".
  std::string scenario_label() const;
};

/// Known presets: worst (p=0.2, 2 dB), best (p=0.8, 4 dB),
/// normal (p=0.8, 2 dB).  Throws ConfigError for unknown names.
void apply_scenario(ExperimentConfig& cfg);

/// Vote probabilities for the configured thresholds under both systems.
/// One CSV row per configured system; at least one of --eta or the
/// --eta0/--eta1 pair must be present.
int cmd_local_probs(const ExperimentConfig& cfg);

/// Closed-form and simulated metrics for k = 1..k_max for both systems.
/// Requires --eta and --eta0/--eta1.  Byte-identical output for identical
/// configuration and seed, independent of the worker count.
int cmd_sweep(const ExperimentConfig& cfg);

/// Grid-search optimal thresholds per scenario per k, with gain columns on
/// the censoring rows.  Without an explicit scenario or p/SNR override it
/// runs all three presets.
int cmd_optimize(const ExperimentConfig& cfg);

/// Cross-checks the closed forms, the simulator, the exhaustive oracle and
/// the statistic sampler against each other.  Prints one line per check;
/// returns exit_validation_failure if any tolerance is exceeded.
/// `inject_wrong_variance` deliberately corrupts the closed-form variance to
/// prove the checks can fail.
int cmd_validate(const ExperimentConfig& cfg, bool inject_wrong_variance);

}  // namespace censorsense
