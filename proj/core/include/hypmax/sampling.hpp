#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hypmax/errors.hpp"
#include "hypmax/geometry.hpp"

namespace hypmax {

/// Mixes a key into a seed (splitmix64 finalizer). Used to give every grid
/// cell its own stream without coordinating shards.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key);

/// Reproducible random stream identified by (seed, shard).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t shard);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t shard() const { return shard_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() { return normal_(engine_); }
  /// Uniform direction on S^(n-1), written to out[0..n).
  void unit_vector(int n, double* out);

  /// Independent stream for a sub-task, keyed deterministically.
  RngStream substream(std::uint64_t key) const { return {derive_seed(seed_, key), shard_}; }

 private:
  std::uint64_t seed_;
  std::uint64_t shard_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;
};

/// Combines estimates of the same quantity from independent streams,
/// weighting by sample count. Associative and commutative.
McEstimate merge(const McEstimate& a, const McEstimate& b);
McEstimate merge(const std::vector<McEstimate>& parts);

/// Radius t in [0, r] with P(radius <= t) = u under the radial density
/// proportional to sinh^(n-1).
double radial_inverse_cdf(int n, double r, double u);
/// Same, restricted to [lo, hi].
double radial_inverse_cdf(int n, double lo, double hi, double u);

/// Draws mu_n-uniform points from a fixed ball.
class BallSampler {
 public:
  explicit BallSampler(const BallSpec& ball);
  Point operator()(RngStream& rng) const;
  const BallSpec& ball() const { return ball_; }

 private:
  BallSpec ball_;
  bool centered_;
};

std::vector<Point> sample_ball(RngStream& rng, const BallSpec& ball, int count);
/// Points of C_j = B(0, j) \ B(0, j - 1).
std::vector<Point> sample_annulus(RngStream& rng, int n, int j, int count);

inline constexpr long long kMinMcSamples = 100;

/// mu_n(region) for region contained in `envelope`: hit fraction times the
/// envelope volume, with binomial standard error.
template <class Pred>
McEstimate mc_region_measure(RngStream& rng, Pred&& region, const BallSpec& envelope,
                             long long n_samples) {
  if (n_samples < kMinMcSamples) throw UsageError("mc_region_measure: need >= 100 samples");
  const BallSampler sampler(envelope);
  long long hits = 0;
  for (long long i = 0; i < n_samples; ++i) {
    if (region(sampler(rng))) ++hits;
  }
  const double volume = ball_volume(envelope.dim(), envelope.radius);
  const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
  return {p * volume, volume * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples)),
          n_samples};
}

/// Splits n_samples over `shards` streams (seed, 0..shards-1), runs them on up
/// to `threads` workers and merges in shard order, so the result depends on
/// (seed, shards) only.
template <class Pred>
McEstimate mc_region_measure_sharded(std::uint64_t seed, int shards, Pred&& region,
                                     const BallSpec& envelope, long long n_samples, int threads);

}  // namespace hypmax

#include "hypmax/parallel.hpp"

namespace hypmax {

template <class Pred>
McEstimate mc_region_measure_sharded(std::uint64_t seed, int shards, Pred&& region,
                                     const BallSpec& envelope, long long n_samples, int threads) {
  if (shards < 1) throw UsageError("mc_region_measure: shards must be >= 1");
  if (n_samples < kMinMcSamples * shards) {
    throw UsageError("mc_region_measure: need >= 100 samples per shard");
  }
  std::vector<McEstimate> parts(static_cast<std::size_t>(shards));
  parallel_for(parts.size(), threads, [&](std::size_t k) {
    RngStream rng(seed, k);
    const long long quota = n_samples / shards + (static_cast<long long>(k) < n_samples % shards);
    parts[k] = mc_region_measure(rng, region, envelope, quota);
  });
  return merge(parts);
}

}  // namespace hypmax
