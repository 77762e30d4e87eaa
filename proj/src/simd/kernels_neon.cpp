// AArch64 only; NEON is part of the base ISA there so no runtime probe is needed.

#include <arm_neon.h>

#include "variants.hpp"

namespace cpr::simd {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * stride, x, cols);
}

void matvec_t_neon(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                   const double* x, double* y) {
  std::size_t c = 0;
  for (; c + 2 <= cols; c += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      acc = vfmaq_f64(acc, vdupq_n_f64(x[r]), vld1q_f64(a + r * stride + c));
    }
    vst1q_f64(y + c, acc);
  }
  for (; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += x[r] * a[r * stride + c];
    y[c] = acc;
  }
}

void sum_sq2_neon(const double* p, const double* q, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t pv = vld1q_f64(p + i);
    const float64x2_t qv = vld1q_f64(q + i);
    vst1q_f64(out + i, vfmaq_f64(vmulq_f64(qv, qv), pv, pv));
  }
  for (; i < n; ++i) out[i] = p[i] * p[i] + q[i] * q[i];
}

}  // namespace

namespace detail {

const KernelSet& neon_table() {
  static const KernelSet set{"neon", dot_neon, axpy_neon, matvec_neon, matvec_t_neon,
                             sum_sq2_neon};
  return set;
}

}  // namespace detail
}  // namespace cpr::simd
