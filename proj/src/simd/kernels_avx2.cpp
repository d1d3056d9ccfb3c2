// Compiled with -mavx2 (no -mfma). Only reached after a runtime CPU check.
#include "dynevo/simd/kernels.hpp"

#include <immintrin.h>

namespace dynevo::simd {
namespace {

double reduce_tail(__m256d acc, const double* w, const std::int32_t* idx, const double* x,
                   std::size_t i, std::size_t n) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += w[i] * x[idx[i]];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_gather_avx2(const double* w, const std::int32_t* idx, const double* x,
                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d xv = _mm256_i32gather_pd(x, vi, 8);
    const __m256d wv = _mm256_loadu_pd(w + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, xv));
  }
  return reduce_tail(acc, w, idx, x, i, n);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t l = 0; i < n; ++i, ++l) lane[l] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", &dot_gather_avx2, &dot_avx2};
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &k : nullptr;
}

}  // namespace dynevo::simd
