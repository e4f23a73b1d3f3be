// AVX2 + FMA variants of the dense kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through the dispatch table.
#include <immintrin.h>

#include <cstring>

#include "causalfuzz/kernels.hpp"

namespace causalfuzz::kernels {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void gemm_nn_avx2(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a[i * k + l];
      if (ail == 0.0) continue;
      const __m256d va = _mm256_set1_pd(ail);
      const double* brow = b + l * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d vc = _mm256_loadu_pd(crow + j);
        vc = _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j), vc);
        _mm256_storeu_pd(crow + j, vc);
      }
      for (; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

void gemm_nt_avx2(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = dot_avx2(arow, b + j * k, k);
    }
  }
}

void center_rows_avx2(double* x, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = x + i * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + j));
    double sum = hsum(acc);
    for (; j < cols; ++j) sum += row[j];
    const double mean = sum / static_cast<double>(cols);
    const __m256d vm = _mm256_set1_pd(mean);
    j = 0;
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(row + j, _mm256_sub_pd(_mm256_loadu_pd(row + j), vm));
    }
    for (; j < cols; ++j) row[j] -= mean;
  }
}

double mean_one_minus_sq_avx2(const double* g, std::size_t n) {
  const __m256d ones = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(g + i);
    acc = _mm256_add_pd(acc, _mm256_fnmadd_pd(v, v, ones));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += 1.0 - g[i] * g[i];
  return sum / static_cast<double>(n);
}

void scale_avx2(double* x, std::size_t n, double s) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) x[i] *= s;
}

}  // namespace

namespace detail {

const KernelTable& avx2_table() {
  static const KernelTable t{dot_avx2,          gemm_nn_avx2,
                             gemm_nt_avx2,      center_rows_avx2,
                             mean_one_minus_sq_avx2, scale_avx2};
  return t;
}

}  // namespace detail

}  // namespace causalfuzz::kernels
