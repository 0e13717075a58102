#include "censorsense/consensus.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "censorsense/random.hpp"

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

}  // namespace

TEST_SUITE("consensus") {

TEST_CASE("full connectivity collapses every node onto the vote sum") {
  // With p == 1 every edge is present in every step, so the combine rule
  // reduces exactly to y_i = S / m with S the sum of all initial votes.
  const std::vector<std::vector<Trit>> vote_sets = {
      {Trit::vote_busy, Trit::vote_free, Trit::censor, Trit::vote_busy},
      {Trit::vote_free, Trit::vote_free, Trit::vote_busy, Trit::censor},
      {Trit::censor, Trit::censor, Trit::censor, Trit::censor},
  };
  for (const auto& votes : vote_sets) {
    long s = 0;
    for (const Trit t : votes) s += trit_value(t);
    for (const int k : {1, 3}) {
      const auto cfg = make_cfg(static_cast<int>(votes.size()), 1.0, k);
      Rng rng(7);
      const ConsensusRun run = run_consensus(votes, cfg, rng);
      for (int i = 0; i < cfg.m; ++i) {
        CHECK(run.combined[i] == static_cast<double>(s) / cfg.m);
        CHECK(run.decisions[i] == (s >= 0 ? 1 : 0));
      }
    }
  }
}

TEST_CASE("unanimous votes survive any graph") {
  Rng rng(11);
  const auto cfg = make_cfg(9, 0.3, 2);
  const ConsensusRun busy =
      run_consensus(std::vector<Trit>(9, Trit::vote_busy), cfg, rng);
  const ConsensusRun free_run =
      run_consensus(std::vector<Trit>(9, Trit::vote_free), cfg, rng);
  CHECK(global_and(busy.decisions));
  for (const auto d : free_run.decisions) CHECK(d == 0);
}

TEST_CASE("all-censor rounds land on the tie and follow the policy") {
  const std::vector<Trit> silent(5, Trit::censor);
  Rng rng(3);
  const ConsensusRun one =
      run_consensus(silent, make_cfg(5, 0.5, 1, TiePolicy::one_on_tie), rng);
  const ConsensusRun zero =
      run_consensus(silent, make_cfg(5, 0.5, 1, TiePolicy::zero_on_tie), rng);
  for (int i = 0; i < 5; ++i) {
    CHECK(one.combined[i] == 0.0);
    CHECK(one.decisions[i] == 1);
    CHECK(zero.decisions[i] == 0);
  }
}

TEST_CASE("finalize_votes hits exact zero for balanced tallies") {
  // k * p == 1, so a +1 vote cancelled by a raw tally of -1 sits exactly on
  // the decision boundary; the tie policy must pick the branch.
  const auto cfg1 = make_cfg(2, 0.5, 2, TiePolicy::one_on_tie);
  const auto cfg0 = make_cfg(2, 0.5, 2, TiePolicy::zero_on_tie);
  const std::vector<Trit> votes{Trit::vote_busy, Trit::vote_free};
  const std::vector<long> raw{-1, 1};
  const ConsensusRun a = finalize_votes(votes, raw, cfg1);
  const ConsensusRun b = finalize_votes(votes, raw, cfg0);
  CHECK(a.combined[0] == 0.0);
  CHECK(a.combined[1] == 0.0);
  CHECK(a.decisions[0] == 1);
  CHECK(a.decisions[1] == 1);
  CHECK(b.decisions[0] == 0);
  CHECK(b.decisions[1] == 0);
}

TEST_CASE("sampled graphs are symmetric, hollow, and have Bernoulli edges") {
  Rng rng(99);
  const int m = 20;
  const double p = 0.3;
  const int reps = 2000;
  long edges = 0;
  for (int r = 0; r < reps; ++r) {
    const Adjacency g = sample_graph(m, p, rng);
    for (int i = 0; i < m; ++i) {
      CHECK_FALSE(g.at(i, i));
      for (int j = i + 1; j < m; ++j) {
        CHECK(g.at(i, j) == g.at(j, i));
        edges += g.at(i, j);
      }
    }
  }
  const double pairs = m * (m - 1) / 2.0;
  const double mean_edges = static_cast<double>(edges) / reps;
  const double se = std::sqrt(pairs * p * (1.0 - p) / reps);
  CHECK(std::fabs(mean_edges - pairs * p) <= 4.0 * se);
}

TEST_CASE("three-node decision distribution matches edge-mask enumeration") {
  // One busy vote, one abstention, one free vote; k = 1.  All eight edge
  // masks are enumerable by hand, which gives the exact distribution over
  // decision patterns to hold the sampled rounds against.
  const std::vector<Trit> votes{Trit::vote_busy, Trit::censor,
                                Trit::vote_free};
  for (const double p : {0.4, 0.8}) {
    const auto cfg = make_cfg(3, p, 1);
    std::array<double, 8> exact{};  // probability of each decision bitmask
    // Pair order (0,1), (0,2), (1,2); mask bit b set means edge present.
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<long> raw(3, 0);
      const auto add_edge = [&](int i, int j) {
        raw[i] += trit_value(votes[j]);
        raw[j] += trit_value(votes[i]);
      };
      if (mask & 1) add_edge(0, 1);
      if (mask & 2) add_edge(0, 2);
      if (mask & 4) add_edge(1, 2);
      const int n_edges = ((mask & 1) != 0) + ((mask & 2) != 0) + ((mask & 4) != 0);
      const double weight =
          std::pow(p, n_edges) * std::pow(1.0 - p, 3 - n_edges);
      const ConsensusRun run = finalize_votes(votes, raw, cfg);
      const int pattern = run.decisions[0] | (run.decisions[1] << 1) |
                          (run.decisions[2] << 2);
      exact[static_cast<size_t>(pattern)] += weight;
    }

    const int trials = 100000;
    std::array<long, 8> seen{};
    Rng rng(p < 0.5 ? 41 : 42);
    for (int t = 0; t < trials; ++t) {
      const ConsensusRun run = run_consensus(votes, cfg, rng);
      const int pattern = run.decisions[0] | (run.decisions[1] << 1) |
                          (run.decisions[2] << 2);
      ++seen[static_cast<size_t>(pattern)];
    }
    for (int pattern = 0; pattern < 8; ++pattern) {
      const double want = exact[static_cast<size_t>(pattern)];
      const double got =
          static_cast<double>(seen[static_cast<size_t>(pattern)]) / trials;
      const double se = std::sqrt(want * (1.0 - want) / trials);
      CHECK(std::fabs(got - want) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("combined votes have the predicted mean and variance") {
  // For node i with vote b_i and vote vector summing to S with C nonzero
  // votes:  E[m * y_i] = S  and  Var[m * y_i] = (1-p)(C - b_i^2)/(k p).
  const std::vector<Trit> votes{Trit::vote_busy, Trit::vote_busy,
                                Trit::vote_busy,  Trit::censor,
                                Trit::censor,     Trit::vote_free,
                                Trit::vote_free,  Trit::vote_busy,
                                Trit::vote_free,  Trit::censor};
  const auto cfg = make_cfg(10, 0.6, 2);
  long s = 0, c = 0;
  for (const Trit t : votes) {
    s += trit_value(t);
    c += trit_value(t) != 0;
  }
  const int trials = 40000;
  std::vector<double> sum(10, 0.0), sumsq(10, 0.0);
  Rng rng(5150);
  for (int t = 0; t < trials; ++t) {
    const ConsensusRun run = run_consensus(votes, cfg, rng);
    for (int i = 0; i < 10; ++i) {
      const double scaled = run.combined[i] * cfg.m;
      sum[i] += scaled;
      sumsq[i] += scaled * scaled;
    }
  }
  for (int i = 0; i < 10; ++i) {
    const int b = trit_value(votes[i]);
    const double want_var =
        (1.0 - cfg.p) * static_cast<double>(c - b * b) / (cfg.k * cfg.p);
    const double mean = sum[i] / trials;
    const double var = sumsq[i] / trials - mean * mean;
    const double se_mean = std::sqrt(want_var / trials);
    CHECK(std::fabs(mean - s) <= 4.0 * se_mean);
    CHECK(var == doctest::Approx(want_var).epsilon(0.05));
  }
}

TEST_CASE("single node decides on its own vote") {
  Rng rng(1);
  const auto one = run_consensus({Trit::vote_busy}, make_cfg(1, 0.5, 1), rng);
  CHECK(one.combined[0] == 1.0);
  CHECK(one.decisions[0] == 1);
  const auto tie = run_consensus({Trit::censor},
                                 make_cfg(1, 0.5, 1, TiePolicy::zero_on_tie),
                                 rng);
  CHECK(tie.decisions[0] == 0);
}

TEST_CASE("transmission counting skips censoring nodes") {
  const std::vector<Trit> votes{Trit::vote_busy, Trit::censor, Trit::vote_free,
                                Trit::censor};
  CHECK(count_transmissions(votes, 3) == 6);
  CHECK(count_transmissions(votes, 1) == 2);
  CHECK(count_transmissions(std::vector<Trit>(4, Trit::censor), 5) == 0);
}

TEST_CASE("global_and requires unanimity") {
  CHECK(global_and({1, 1, 1}));
  CHECK_FALSE(global_and({1, 0, 1}));
  CHECK_FALSE(global_and({0, 0, 0}));
}

TEST_CASE("configuration and input validation") {
  CHECK_THROWS_AS(make_cfg(0, 0.5, 1).validate(), std::domain_error);
  CHECK_THROWS_AS(make_cfg(3, 0.0, 1).validate(), std::domain_error);
  CHECK_THROWS_AS(make_cfg(3, 1.2, 1).validate(), std::domain_error);
  CHECK_THROWS_AS(make_cfg(3, 0.5, 0).validate(), std::domain_error);
  NetworkConfig bad = make_cfg(3, 0.5, 1);
  bad.prior_h0 = 0.7;  // priors no longer sum to one
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  Rng rng(1);
  CHECK_THROWS_AS(
      run_consensus({Trit::vote_busy}, make_cfg(2, 0.5, 1), rng),
      std::invalid_argument);
}

}  // TEST_SUITE
