#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dynevo::envs {

/// Per-dimension online mean/variance (Welford) used to standardize
/// observations.
class RunningStandardizer {
 public:
  static constexpr double kEpsilon = 1e-8;

  RunningStandardizer() = default;
  explicit RunningStandardizer(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

  void update(std::span<const double> x);

  /// (x - mean) / (sqrt(m2 / count) + eps); zeros until two samples are seen.
  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> x) const;

  std::size_t dim() const { return mean_.size(); }
  std::uint64_t count() const { return count_; }
  std::span<const double> mean() const { return mean_; }
  std::span<const double> m2() const { return m2_; }
  /// Population variance m2 / count; zero before the first sample.
  double variance(std::size_t i) const;

  /// Restores serialized statistics.
  static RunningStandardizer from_parts(std::uint64_t count, std::vector<double> mean,
                                        std::vector<double> m2);

  friend bool operator==(const RunningStandardizer&, const RunningStandardizer&) = default;

 private:
  std::uint64_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace dynevo::envs
