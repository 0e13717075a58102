#pragma once

#include <cstdint>
#include <vector>

#include "censorsense/random.hpp"
#include "censorsense/sensing.hpp"

namespace censorsense {

/// How a node resolves a combined vote of exactly zero.
enum class TiePolicy { one_on_tie, zero_on_tie };

/// Network-level parameters shared by the simulator and the closed forms.
struct NetworkConfig {
  int m = 51;          // number of nodes
  double p = 0.8;      // independent link probability per pair per step
  int k = 1;           // number of broadcast steps
  TiePolicy tie_policy = TiePolicy::one_on_tie;
  double prior_h0 = 0.5;
  double prior_h1 = 0.5;

  void validate() const;
};

/// Symmetric, zero-diagonal adjacency matrix of one broadcast step.
class Adjacency {
 public:
  explicit Adjacency(int m) : m_(m), bits_(static_cast<size_t>(m) * m, 0) {}

  int size() const { return m_; }
  bool at(int i, int j) const { return bits_[static_cast<size_t>(i) * m_ + j] != 0; }
  void set(int i, int j, bool present) {
    bits_[static_cast<size_t>(i) * m_ + j] = present;
    bits_[static_cast<size_t>(j) * m_ + i] = present;
  }

 private:
  int m_;
  std::vector<std::uint8_t> bits_;
};

/// One Erdos-Renyi draw: every unordered pair {i, j}, i < j in row-major
/// order, flips an independent Bernoulli(p) coin.
Adjacency sample_graph(int m, double p, Rng& rng);

/// Outcome of one consensus round.
struct ConsensusRun {
  std::vector<Trit> initial;           // votes broadcast every step
  std::vector<double> combined;        // y_i after k steps
  std::vector<std::uint8_t> decisions; // 1 where the node declares busy
  int steps = 0;
};

/// Runs the diversity scheme: every node rebroadcasts its initial vote for
/// k steps over fresh random graphs, then combines
///   y_i = (1/m) * (b_i + (1/(k p)) * sum_t sum_j a_ij(t) b_j)
/// and decides busy when y_i is positive (ties per the configured policy).
ConsensusRun run_consensus(const std::vector<Trit>& initial,
                           const NetworkConfig& cfg, Rng& rng);

/// Deterministic tail of run_consensus: turns integer received-vote tallies
/// raw[i] = sum_t sum_j a_ij(t) b_j into combined values and decisions.
/// Shared with the exhaustive oracle so both paths decide identically.
ConsensusRun finalize_votes(const std::vector<Trit>& initial,
                            const std::vector<long>& raw,
                            const NetworkConfig& cfg);

/// True when every node declared busy (the network detects the channel as
/// occupied only on unanimity).
bool global_and(const std::vector<std::uint8_t>& decisions);

/// Total transmissions in a round: censoring nodes stay silent, every other
/// node transmits once per step.
long count_transmissions(const std::vector<Trit>& initial, int k);

}  // namespace censorsense
