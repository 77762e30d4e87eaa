#include <cstdlib>
#include <string_view>

#include "variants.hpp"

namespace cpr::simd {

const KernelSet* avx2_kernels() {
#if defined(CPR_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet* neon_kernels() {
#if defined(CPR_HAVE_NEON)
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

namespace {

const KernelSet& select() {
  const char* env = std::getenv("CPR_SIMD");
  const std::string_view request = env ? env : "auto";
  if (request == "scalar") return scalar_kernels();
  if (request == "avx2") return avx2_kernels() ? *avx2_kernels() : scalar_kernels();
  if (request == "neon") return neon_kernels() ? *neon_kernels() : scalar_kernels();
  if (const KernelSet* k = avx2_kernels()) return *k;
  if (const KernelSet* k = neon_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const KernelSet& active() {
  static const KernelSet& chosen = select();
  return chosen;
}

}  // namespace cpr::simd
