#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace motivsim {

/// Seeded random source with platform-independent draws.
///
/// std::uniform_*_distribution output differs between standard libraries, so
/// the mappings from raw 64-bit words to doubles and bounded integers are done
/// here. The engine itself (mt19937_64) is fully specified by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derives the seed of a named stream from a master seed. Each consumer of
/// randomness (weights, resets, policy, test starts) gets its own stream so
/// that changing how one consumer draws leaves the others untouched.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream);

}  // namespace motivsim
