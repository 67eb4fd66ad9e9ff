#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace boxlab {

/// Deterministic random stream with a fixed cross-platform layout. The
/// transformations below are part of the external contract: regression tests
/// and published Monte Carlo numbers depend on them bit for bit.
///
///   engine        std::mt19937_64 seeded with the raw 64-bit seed (root
///                 stream) or with substream_seed(seed, stream)
///   unit double   (next_u64() >> 11) * 2^-53, in [0, 1)
///   bit           next_u64() >> 63
///   gaussian      Box-Muller on (1 - unit, unit); the cosine branch is
///                 returned first, the sine branch is cached for the next call
///   unit vector   gaussian triple (in call order) normalized to length one
///
/// Parallel workers take disjoint substreams (seed, stream-index), so results
/// never depend on the worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(substream_seed(seed, stream)) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  static std::uint64_t substream_seed(std::uint64_t seed,
                                      std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ (stream + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  int next_bit() { return int(next_u64() >> 63); }

  /// Uniform integer in [0, n) by modulo reduction (bias is irrelevant at
  /// the alphabet sizes used here; determinism is what matters).
  std::size_t next_below(std::size_t n) {
    return std::size_t(next_u64() % std::uint64_t(n));
  }

  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  std::array<double, 3> next_unit_vector3() {
    while (true) {
      const double x = next_gaussian();
      const double y = next_gaussian();
      const double z = next_gaussian();
      const double norm = std::sqrt(x * x + y * y + z * z);
      if (norm >= 1e-12) return {x / norm, y / norm, z / norm};
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace boxlab
