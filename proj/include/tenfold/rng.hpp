#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tenfold {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives the seed of an independent stream from a master seed and an
/// index: splitmix64(master ^ splitmix64(index)). Used for per-replicate
/// streams so results do not depend on which thread draws which replicate.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

using Engine = std::mt19937_64;

/// Gaussian source for one stream: mt19937_64 feeding
/// std::normal_distribution (Marsaglia polar method in libstdc++).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double operator()(double variance) { return std::sqrt(variance) * normal_(engine_); }
  double standard() { return normal_(engine_); }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tenfold
