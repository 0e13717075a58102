#pragma once

#include <cstdint>
#include <random>

namespace censorsense {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to spread correlated seed material apart.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for an independent sub-stream identified by (stream, substream).
/// Every Monte Carlo trial gets its own engine seeded this way, so results
/// depend only on the master seed and the trial's identity, never on thread
/// scheduling or evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t substream) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ substream);
}

/// Uniform draw in [0, 1 - 2^-53].  The top value is strictly below 1.0,
/// so comparing u < p implements Bernoulli(p) exactly at p == 1.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace censorsense
