#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace stabgen {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Seed of the `index`-th independent stream derived from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// mt19937_64 with distribution helpers written out explicitly: the standard
/// library distributions are implementation-defined, and shards must be
/// byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi] without modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  /// Index drawn proportionally to non-negative weights (at least one > 0).
  std::size_t weighted(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace stabgen
