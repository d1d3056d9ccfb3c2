#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace dynevo {

/// SplitMix64 finalizer. Every derived seed in the project goes through this.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Folds `value` into a running hash `h`.
constexpr std::uint64_t mix64(std::uint64_t h, std::uint64_t value) noexcept {
  return mix64(h ^ mix64(value));
}

/// Deterministic pseudorandom stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard leaves their algorithms unspecified:
///   - uniform_index: rejection on `engine() < (2^64 mod n)`, then modulo.
///   - uniform01: top 53 bits scaled by 2^-53, range [0, 1).
///   - normal: Marsaglia polar method, second variate discarded so each call
///     consumes a whole number of engine outputs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). `n` must be positive.
  std::size_t uniform_index(std::size_t n);

  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal draw.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dynevo
