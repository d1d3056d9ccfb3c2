#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dynevo::simd {

// Every variant accumulates into four lanes: term i goes to lane i % 4, the
// lanes are reduced as (l0 + l1) + (l2 + l3). Products and sums are rounded
// separately (no fused multiply-add), so all variants return bit-identical
// results for identical inputs. The project is built with -ffp-contract=off
// to keep the scalar path from being contracted into FMAs.

/// sum_i weights[i] * values[index[i]]
using DotGatherFn = double (*)(const double* weights, const std::int32_t* index,
                               const double* values, std::size_t n);

/// sum_i a[i] * b[i]
using DotFn = double (*)(const double* a, const double* b, std::size_t n);

struct Kernels {
  std::string_view name;
  DotGatherFn dot_gather;
  DotFn dot;
};

const Kernels& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks support.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

/// Best supported variant. `DYNEVO_SIMD=scalar` forces the scalar reference.
/// Resolved once; later environment changes are ignored.
const Kernels& active_kernels();

/// All variants usable on this machine, scalar first.
std::span<const Kernels* const> available_kernels();

}  // namespace dynevo::simd
