#include "censorsense/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace censorsense {

std::vector<double> GridSpec::values() const {
  validate();
  const long n = std::lround((hi - lo) / step) + 1;
  std::vector<double> out;
  out.reserve(n);
  for (long i = 0; i < n; ++i) {
    const double v = lo + i * step;
    if (v <= hi + 0.5 * step) out.push_back(std::min(v, hi));
  }
  return out;
}

void GridSpec::validate() const {
  if (!(step > 0.0) || !(lo >= 0.0) || !(hi >= lo)) {
    throw std::domain_error("grid requires 0 <= lo <= hi and step > 0");
  }
  const double n = (hi - lo) / step + 1.0;
  if (n * (n + 1.0) / 2.0 > 1e6) {
    throw std::domain_error("grid too fine: more than 1e6 threshold pairs");
  }
}

namespace {

/// Vote-probability tails precomputed once per grid axis.
struct AxisTables {
  std::vector<double> eta;
  std::vector<double> exceed_h1;  // Pr(statistic >= eta | h1)
  std::vector<double> exceed_h0;
};

AxisTables build_axis(const DetectorParams& det, const GridSpec& grid) {
  AxisTables t;
  t.eta = grid.values();
  t.exceed_h1.reserve(t.eta.size());
  t.exceed_h0.reserve(t.eta.size());
  for (const double e : t.eta) {
    t.exceed_h1.push_back(prob_exceed_given_h1(e, det));
    t.exceed_h0.push_back(prob_exceed_given_h0(e, det));
  }
  return t;
}

/// Vote rows for the pair (eta[i_lo], eta[i_hi]).  On the diagonal the
/// censor probability is an exact zero (identical subtraction both ways),
/// so those candidates evaluate bitwise like conventional thresholds.
LocalDecisionProbs rows_for_pair(const AxisTables& t, size_t i_lo, size_t i_hi) {
  LocalDecisionProbs probs;
  probs.p1_h1 = t.exceed_h1[i_hi];
  probs.p1_h0 = t.exceed_h0[i_hi];
  probs.pm1_h1 = 1.0 - t.exceed_h1[i_lo];
  probs.pm1_h0 = 1.0 - t.exceed_h0[i_lo];
  probs.p0_h1 = (1.0 - probs.p1_h1) - probs.pm1_h1;
  probs.p0_h0 = (1.0 - probs.p1_h0) - probs.pm1_h0;
  return probs;
}

struct Candidate {
  double p_e = 2.0;  // above any probability, so any real candidate wins
  double band = 0.0; // hi - lo
  double lo = 0.0;
  size_t i_lo = 0;
  size_t i_hi = 0;
};

/// Strict weak order: smaller error, then narrower band, then smaller lo.
/// Total over distinct threshold pairs, which makes the scan result
/// independent of evaluation order.
bool better(const Candidate& a, const Candidate& b) {
  if (a.p_e != b.p_e) return a.p_e < b.p_e;
  if (a.band != b.band) return a.band < b.band;
  return a.lo < b.lo;
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return hw < 1 ? 1 : hw;
}

/// Runs fn(first, last, slot) over `jobs` split into contiguous chunks and
/// merges the per-chunk winners in slot order.
template <typename Fn>
Candidate scan_chunks(size_t jobs, int workers, Fn fn) {
  workers = resolve_workers(workers);
  if (static_cast<size_t>(workers) > jobs) workers = static_cast<int>(jobs);
  if (workers <= 1) {
    Candidate best;
    fn(size_t{0}, jobs, best);
    return best;
  }
  std::vector<Candidate> bests(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const size_t chunk = (jobs + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const size_t first = w * chunk;
    const size_t last = std::min(jobs, first + chunk);
    threads.emplace_back([&, w, first, last] {
      if (first < last) fn(first, last, bests[w]);
    });
  }
  for (auto& th : threads) th.join();
  Candidate best;
  for (const auto& c : bests) {
    if (better(c, best)) best = c;
  }
  return best;
}

}  // namespace

OptResult optimize_conventional(const NetworkConfig& cfg,
                                const DetectorParams& det, const GridSpec& grid,
                                double e_unit, int workers) {
  cfg.validate();
  det.validate();
  const AxisTables axis = build_axis(det, grid);
  const ConsensusCltModel model(cfg);

  const Candidate best = scan_chunks(
      axis.eta.size(), workers,
      [&](size_t first, size_t last, Candidate& out) {
        for (size_t i = first; i < last; ++i) {
          const LocalDecisionProbs probs = rows_for_pair(axis, i, i);
          const double pd = model.all_busy_prob(probs.row(Hypothesis::h1));
          const double pfa = model.all_busy_prob(probs.row(Hypothesis::h0));
          const Candidate cand{avg_error(pd, pfa, cfg.prior_h0, cfg.prior_h1),
                               0.0, axis.eta[i], i, i};
          if (better(cand, out)) out = cand;
        }
      });

  OptResult result;
  result.thresholds = Thresholds::conventional(axis.eta[best.i_lo]);
  result.metrics = metric_report(cfg, local_probs(result.thresholds, det), e_unit);
  return result;
}

OptResult optimize_censoring(const NetworkConfig& cfg, const DetectorParams& det,
                             const GridSpec& grid, double e_unit, int workers) {
  cfg.validate();
  det.validate();
  const AxisTables axis = build_axis(det, grid);
  const ConsensusCltModel model(cfg);
  const size_t n = axis.eta.size();

  // Jobs are lower-threshold indices; each scans its upper thresholds.
  const Candidate best = scan_chunks(
      n, workers, [&](size_t first, size_t last, Candidate& out) {
        for (size_t i = first; i < last; ++i) {
          for (size_t j = i; j < n; ++j) {
            const LocalDecisionProbs probs = rows_for_pair(axis, i, j);
            const double pd = model.all_busy_prob(probs.row(Hypothesis::h1));
            const double pfa = model.all_busy_prob(probs.row(Hypothesis::h0));
            const Candidate cand{
                avg_error(pd, pfa, cfg.prior_h0, cfg.prior_h1),
                axis.eta[j] - axis.eta[i], axis.eta[i], i, j};
            if (better(cand, out)) out = cand;
          }
        }
      });

  OptResult result;
  result.thresholds =
      Thresholds::censoring(axis.eta[best.i_lo], axis.eta[best.i_hi]);
  result.metrics = metric_report(cfg, local_probs(result.thresholds, det), e_unit);
  return result;
}

GainReport compute_gains(const MetricReport& conventional,
                         const MetricReport& censoring) {
  const auto pct = [](double conv, double cens) {
    return conv > 0.0 ? (conv - cens) / conv * 100.0 : 0.0;
  };
  GainReport out;
  out.error_pct = pct(conventional.p_e, censoring.p_e);
  out.energy_pct = pct(conventional.avg_energy, censoring.avg_energy);
  out.overhead_pct = pct(conventional.avg_overhead, censoring.avg_overhead);
  return out;
}

}  // namespace censorsense
