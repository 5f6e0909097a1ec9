#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "otkit/error.hpp"

// Deterministic random numbers.
//
// Every stochastic step in the toolkit (k-means seeding, restarts, class
// balancing, fold assignment, synthetic sampling, ...) draws from this
// generator rather than from <random>, because the standard distributions
// are implementation-defined: the same seed produces different streams on
// different standard libraries.  Reproducibility down to the byte is a core
// contract here, so the generator and every distribution on top of it are
// spelled out exactly.
//
// The generator is splitmix64 (Steele, Lea & Flood's SplittableRandom
// finalizer).  It is tiny, passes BigCrush, and — unlike seeding one big
// engine and sharing it — lets us derive independent child streams for
// parallel work: derive_seed(seed, tag, index) gives every restart, judge,
// fold and sweep repetition its own stream, so results do not depend on
// scheduling or worker-thread count.

namespace otkit {

inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Labels for independent sub-streams.  The numeric values are part of the
// reproducibility contract: changing them changes every seeded artifact.
enum class SeedTag : std::uint64_t {
  restart = 1,   // k-means restart index
  judge = 2,     // per-feature-scheme pipeline run
  phase2 = 3,    // second-phase clustering inside a phase-1 cluster
  fold = 4,      // cross-validation fold shuffling
  sweep = 5,     // sensitivity sweep repetition
  balance = 6,   // class-ratio downsampling
  subsample = 7, // sweep-time corpus downsampling
  shuffle = 8,   // per-epoch example order in supervised training
  xmeans = 9,    // split attempt inside x-means
  design = 10,   // synthetic corpus design-time choices
  sample = 11,   // synthetic corpus token sampling
};

// Child seed for (parent, tag, index).  Mixes all three through the
// splitmix64 finalizer so adjacent indices land far apart.
inline std::uint64_t derive_seed(std::uint64_t seed, SeedTag tag,
                                 std::uint64_t index) noexcept {
  std::uint64_t s = seed;
  (void)splitmix64_next(s);
  s ^= 0x6a09e667f3bcc909ull * static_cast<std::uint64_t>(tag);
  (void)splitmix64_next(s);
  s ^= 0xbb67ae8584caa73bull * (index + 1);
  return splitmix64_next(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept { return splitmix64_next(state_); }

  // Uniform double in [0, 1) with 53 random bits; the usual shift-and-scale
  // construction, exact on any IEEE-754 platform.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).  Rejection sampling keeps it exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    require(n > 0, Errc::internal, "Rng::below called with n == 0");
    const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next();
    while (x >= bound) x = next();
    return x % n;
  }

  // Draw an index from the discrete distribution given by non-negative
  // weights.  Walks the prefix sums in index order, which makes ties and
  // rounding behave identically everywhere.  All-zero weights are the
  // caller's problem to avoid (internal error).
  std::size_t pick_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    require(total > 0.0, Errc::internal, "pick_weighted: zero total weight");
    const double u = uniform() * total;
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      cum += weights[i];
      last_positive = i;
      if (u < cum) return i;
    }
    return last_positive;  // u landed on the rounding sliver past the last bin
  }

  // First k entries of a seeded Fisher–Yates pass over [0, n).  Used for
  // sampling without replacement; callers sort the result when the original
  // order must be preserved.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    require(k <= n, Errc::internal, "sample_indices: k > n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

  // In-place Fisher–Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace otkit
