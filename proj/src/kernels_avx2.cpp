// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "robustflow/kernels.hpp"

namespace robustflow::kernels::avx2 {

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(py + i);
    __m256d y1 = _mm256_loadu_pd(py + i + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i + 4), y1);
    _mm256_storeu_pd(py + i, y0);
    _mm256_storeu_pd(py + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = _mm256_loadu_pd(py + i);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), y0);
    _mm256_storeu_pd(py + i, y0);
  }
  for (; i < n; ++i) py[i] = std::fma(a, px[i], py[i]);
}

void scale(double a, std::span<double> y) {
  const std::size_t n = y.size();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(py + i, _mm256_mul_pd(va, _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] *= a;
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i + 4), _mm256_loadu_pd(py + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum = std::fma(px[i], py[i], sum);
  return sum;
}

void flush_small(double threshold, std::span<double> y) {
  const std::size_t n = y.size();
  double* py = y.data();
  const __m256d vt = _mm256_set1_pd(threshold);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(py + i);
    __m256d mag = _mm256_andnot_pd(sign, v);
    __m256d keep = _mm256_cmp_pd(mag, vt, _CMP_GT_OQ);
    _mm256_storeu_pd(py + i, _mm256_and_pd(v, keep));
  }
  for (; i < n; ++i) {
    if (std::fabs(py[i]) <= threshold) py[i] = 0.0;
  }
}

}  // namespace robustflow::kernels::avx2
