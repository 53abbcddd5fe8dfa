#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mmtda {

/// SplitMix64 step. Used to expand seeds and to mix stream identifiers.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a list of 64-bit words into one seed. Each word passes through a
/// full SplitMix64 avalanche, so changing any word changes every output bit
/// with probability ~1/2 and appending words never perturbs other streams.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

/// xoshiro256** 1.0 (Blackman & Vigna). State is seeded by four SplitMix64
/// outputs. This is the only generator used in the library; all draws go
/// through the helpers below so results are reproducible across platforms
/// (modulo libm differences in log/exp/lgamma).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via the Marsaglia polar method. The spare deviate is cached.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Poisson(lambda). Sequential inversion below 30, PTRS (Hoermann 1993) above.
  std::uint64_t poisson(double lambda);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mmtda
