// Built with -mavx2 -mfma. Nothing in here may run before dispatch has
// confirmed CPU support.

#include <immintrin.h>

#include "variants.hpp"

namespace cpr::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * stride, x, cols);
}

void matvec_t_avx2(const double* a, std::size_t rows, std::size_t cols, std::size_t stride,
                   const double* x, double* y) {
  // Column blocks of 4 held in a register across all rows.
  std::size_t c = 0;
  for (; c + 4 <= cols; c += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(x[r]), _mm256_loadu_pd(a + r * stride + c), acc);
    }
    _mm256_storeu_pd(y + c, acc);
  }
  for (; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += x[r] * a[r * stride + c];
    y[c] = acc;
  }
}

void sum_sq2_avx2(const double* p, const double* q, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pv = _mm256_loadu_pd(p + i);
    const __m256d qv = _mm256_loadu_pd(q + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(pv, pv, _mm256_mul_pd(qv, qv)));
  }
  for (; i < n; ++i) out[i] = p[i] * p[i] + q[i] * q[i];
}

}  // namespace

namespace detail {

const KernelSet& avx2_table() {
  static const KernelSet set{"avx2", dot_avx2, axpy_avx2, matvec_avx2, matvec_t_avx2,
                             sum_sq2_avx2};
  return set;
}

}  // namespace detail
}  // namespace cpr::simd
