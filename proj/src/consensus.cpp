#include "censorsense/consensus.hpp"

#include <cmath>
#include <stdexcept>

namespace censorsense {

void NetworkConfig::validate() const {
  if (m < 1) throw std::domain_error("m must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must be in (0, 1]");
  if (k < 1) throw std::domain_error("k must be >= 1");
  if (!(prior_h0 >= 0.0) || !(prior_h1 >= 0.0) ||
      std::fabs(prior_h0 + prior_h1 - 1.0) > 1e-9) {
    throw std::domain_error("priors must be nonnegative and sum to 1");
  }
}

Adjacency sample_graph(int m, double p, Rng& rng) {
  Adjacency g(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      g.set(i, j, uniform01(rng) < p);
    }
  }
  return g;
}

ConsensusRun run_consensus(const std::vector<Trit>& initial,
                           const NetworkConfig& cfg, Rng& rng) {
  cfg.validate();
  if (static_cast<int>(initial.size()) != cfg.m) {
    throw std::invalid_argument("initial votes must have m entries");
  }
  const int m = cfg.m;
  std::vector<long> raw(m, 0);
  // Same pair order as sample_graph; the matrix itself is never materialized
  // because only received-vote tallies enter the combine step.
  for (int step = 0; step < cfg.k; ++step) {
    for (int i = 0; i < m; ++i) {
      const long bi = trit_value(initial[i]);
      for (int j = i + 1; j < m; ++j) {
        if (uniform01(rng) < cfg.p) {
          raw[i] += trit_value(initial[j]);
          raw[j] += bi;
        }
      }
    }
  }
  return finalize_votes(initial, raw, cfg);
}

ConsensusRun finalize_votes(const std::vector<Trit>& initial,
                            const std::vector<long>& raw,
                            const NetworkConfig& cfg) {
  if (initial.size() != raw.size()) {
    throw std::invalid_argument("initial and raw tallies must match in size");
  }
  const int m = static_cast<int>(initial.size());
  ConsensusRun out;
  out.initial = initial;
  out.combined.resize(m);
  out.decisions.resize(m);
  out.steps = cfg.k;
  const double kp = cfg.k * cfg.p;
  for (int i = 0; i < m; ++i) {
    const double scaled = trit_value(initial[i]) + raw[i] / kp;  // m * y_i
    out.combined[i] = scaled / m;
    out.decisions[i] = (cfg.tie_policy == TiePolicy::one_on_tie ? scaled >= 0.0
                                                                : scaled > 0.0)
                           ? 1
                           : 0;
  }
  return out;
}

bool global_and(const std::vector<std::uint8_t>& decisions) {
  for (const auto d : decisions) {
    if (!d) return false;
  }
  return true;
}

long count_transmissions(const std::vector<Trit>& initial, int k) {
  long talkers = 0;
  for (const Trit t : initial) {
    if (t != Trit::censor) ++talkers;
  }
  return talkers * static_cast<long>(k);
}

}  // namespace censorsense
