// AArch64 only. Two float64x2 accumulators hold lanes (0,1) and (2,3).
#include "dynevo/simd/kernels.hpp"

#include <arm_neon.h>

namespace dynevo::simd {
namespace {

double finish(float64x2_t lo, float64x2_t hi, const double* w, const std::int32_t* idx,
              const double* x, std::size_t i, std::size_t n) {
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += w[i] * x[idx[i]];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_gather_neon(const double* w, const std::int32_t* idx, const double* x,
                       std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double g0[2] = {x[idx[i + 0]], x[idx[i + 1]]};
    const double g1[2] = {x[idx[i + 2]], x[idx[i + 3]]};
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(w + i), vld1q_f64(g0)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(w + i + 2), vld1q_f64(g1)));
  }
  return finish(lo, hi, w, idx, x, i, n);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{"neon", &dot_gather_neon, &dot_neon};
  return &k;
}

}  // namespace dynevo::simd
