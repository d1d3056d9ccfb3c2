#include "dynevo/simd/kernels.hpp"

namespace dynevo::simd {
namespace {

double dot_gather_scalar(const double* w, const std::int32_t* idx, const double* x,
                         std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += w[i + 0] * x[idx[i + 0]];
    lane[1] += w[i + 1] * x[idx[i + 1]];
    lane[2] += w[i + 2] * x[idx[i + 2]];
    lane[3] += w[i + 3] * x[idx[i + 3]];
  }
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += w[i] * x[idx[i]];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += a[i + 0] * b[i + 0];
    lane[1] += a[i + 1] * b[i + 1];
    lane[2] += a[i + 2] * b[i + 2];
    lane[3] += a[i + 3] * b[i + 3];
  }
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", &dot_gather_scalar, &dot_scalar};
  return k;
}

}  // namespace dynevo::simd
