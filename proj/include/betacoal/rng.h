#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace betacoal {

/// SplitMix64 finalizer; used to derive independent per-replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for replicate `index` of a run with `master_seed`. Depends only on the
/// pair, never on scheduling.
constexpr std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// 64-bit Mersenne twister with explicitly defined real-valued transforms so
/// that draws are identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_replicate(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(replicate_seed(master_seed, index));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard exponential.
  double exponential() { return -std::log(uniform_open()); }

 private:
  std::mt19937_64 engine_;
};

/// Poisson(mean) draw: inversion below mean 30, transformed rejection (PTRS)
/// above.
std::int64_t sample_poisson(double mean, Rng& rng);

}  // namespace betacoal
