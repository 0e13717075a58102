#pragma once

#include <vector>

#include "censorsense/analytics.hpp"
#include "censorsense/sensing.hpp"

namespace censorsense {

/// Inclusive threshold grid lo, lo + step, ..., hi.
struct GridSpec {
  double lo = 0.0;
  double hi = 60.0;
  double step = 0.1;

  std::vector<double> values() const;
  void validate() const;  // also guards the pair count at one million
};

/// Winning thresholds with the full closed-form metrics evaluated there.
struct OptResult {
  Thresholds thresholds = Thresholds::conventional(0.0);
  MetricReport metrics;
};

/// Exhaustive scan of the single conventional threshold minimizing the
/// average error probability.  Ties resolve to the smallest threshold, so
/// the result is deterministic for any worker count.
OptResult optimize_conventional(const NetworkConfig& cfg,
                                const DetectorParams& det, const GridSpec& grid,
                                double e_unit = 1.0, int workers = 0);

/// Exhaustive scan over all pairs lo <= hi on the same grid.  Ties resolve
/// to the narrowest censor band, then the smallest lower threshold.  The
/// pair set contains the diagonal, so the minimum never exceeds the
/// conventional optimum on the same grid.
OptResult optimize_censoring(const NetworkConfig& cfg,
                             const DetectorParams& det, const GridSpec& grid,
                             double e_unit = 1.0, int workers = 0);

/// Relative improvement of censoring over conventional, in percent, for
/// error probability, energy, and overhead.  A zero conventional metric
/// yields a zero gain (censoring can then only match it).
struct GainReport {
  double error_pct = 0.0;
  double energy_pct = 0.0;
  double overhead_pct = 0.0;
};

GainReport compute_gains(const MetricReport& conventional,
                         const MetricReport& censoring);

}  // namespace censorsense
