#include <cstdlib>
#include <string_view>
#include <vector>

#include "dynevo/simd/kernels.hpp"

namespace dynevo::simd {

#ifndef DYNEVO_HAVE_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif
#ifndef DYNEVO_HAVE_NEON
const Kernels* neon_kernels() { return nullptr; }
#endif

std::span<const Kernels* const> available_kernels() {
  static const std::vector<const Kernels*> all = [] {
    std::vector<const Kernels*> v{&scalar_kernels()};
    if (const auto* k = avx2_kernels()) v.push_back(k);
    if (const auto* k = neon_kernels()) v.push_back(k);
    return v;
  }();
  return all;
}

const Kernels& active_kernels() {
  static const Kernels& chosen = []() -> const Kernels& {
    if (const char* env = std::getenv("DYNEVO_SIMD")) {
      const std::string_view want(env);
      for (const auto* k : available_kernels())
        if (k->name == want) return *k;
    }
    return *available_kernels().back();
  }();
  return chosen;
}

}  // namespace dynevo::simd
