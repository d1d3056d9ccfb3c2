#include "dynevo/envs/standardizer.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace dynevo::envs {

namespace {
void check_dim(std::size_t want, std::size_t got) {
  if (want != got)
    throw std::invalid_argument(fmt::format("standardizer: expected dimension {}, got {}", want, got));
}
}  // namespace

void RunningStandardizer::update(std::span<const double> x) {
  check_dim(dim(), x.size());
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

double RunningStandardizer::variance(std::size_t i) const {
  return count_ == 0 ? 0.0 : m2_[i] / static_cast<double>(count_);
}

void RunningStandardizer::apply(std::span<const double> x, std::span<double> out) const {
  check_dim(dim(), x.size());
  check_dim(dim(), out.size());
  if (count_ < 2) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = (x[i] - mean_[i]) / (std::sqrt(variance(i)) + kEpsilon);
}

std::vector<double> RunningStandardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  apply(x, out);
  return out;
}

RunningStandardizer RunningStandardizer::from_parts(std::uint64_t count, std::vector<double> mean,
                                                    std::vector<double> m2) {
  if (mean.size() != m2.size()) throw std::invalid_argument("standardizer: mismatched parts");
  RunningStandardizer s;
  s.count_ = count;
  s.mean_ = std::move(mean);
  s.m2_ = std::move(m2);
  return s;
}

}  // namespace dynevo::envs
