#pragma once

// Dense inner-loop kernels shared by the lift, measurement and search code.
//
// Every kernel has a portable scalar reference. Vector variants (AVX2+FMA on
// x86-64, NEON on AArch64) are compiled into separate translation units and
// picked at runtime by active(). The vector variants reassociate sums, so
// they agree with the scalar reference to round-off, not bit-for-bit.
//
// Matrices are dense, row-major, with an explicit row stride (in elements).

#include <cstddef>
#include <string_view>

namespace cpr::simd {

struct KernelSet {
  std::string_view name;

  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = A x, A is rows x cols
  void (*matvec)(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                 const double* x, double* y);
  /// y = A^T x, A is rows x cols, y has cols entries
  void (*matvec_t)(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                   const double* x, double* y);
  /// out[i] = p[i]^2 + q[i]^2
  void (*sum_sq2)(const double* p, const double* q, double* out, std::size_t n);
};

const KernelSet& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelSet* avx2_kernels();
const KernelSet* neon_kernels();

/// The kernel set used by the library. Chosen once: the CPR_SIMD environment
/// variable ("scalar", "avx2", "neon", "auto") overrides autodetection; an
/// unavailable request falls back to scalar.
const KernelSet& active();

}  // namespace cpr::simd
