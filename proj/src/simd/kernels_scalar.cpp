#include "cpr/simd/kernels.hpp"

namespace cpr::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * stride, x, cols);
}

void matvec_t_scalar(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                     const double* x, double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], a + r * stride, y, cols);
}

void sum_sq2_scalar(const double* p, const double* q, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = p[i] * p[i] + q[i] * q[i];
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", dot_scalar, axpy_scalar, matvec_scalar, matvec_t_scalar,
                             sum_sq2_scalar};
  return set;
}

}  // namespace cpr::simd
