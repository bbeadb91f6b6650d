#pragma once

#include <cstdint>
#include <random>

namespace mw {

/// Reproducible random source: a Mersenne Twister (mt19937_64) stream
/// selected by (seed, stream) through a splitmix64 mix, with Gaussian
/// variates from the Marsaglia polar method. All constants are published
/// and fixed, so streams are identical across platforms and runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53 random bits.
  double uniform();
  /// Standard normal.
  double gaussian();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mw
