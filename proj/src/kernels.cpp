#include "causalfuzz/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace causalfuzz::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// saxpy-form product: C row accumulates a_il * B row l, unit stride on B and C.
void gemm_nn_scalar(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a[i * k + l];
      if (ail == 0.0) continue;
      const double* brow = b + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

void gemm_nt_scalar(const double* a, const double* b, double* c, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = dot_scalar(arow, b + j * k, k);
    }
  }
}

void center_rows_scalar(double* x, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = x + i * cols;
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += row[j];
    const double mean = sum / static_cast<double>(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] -= mean;
  }
}

double mean_one_minus_sq_scalar(const double* g, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += 1.0 - g[i] * g[i];
  return acc / static_cast<double>(n);
}

void scale_scalar(double* x, std::size_t n, double s) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

// Concurrent first use is fine: racing initializers store the same table.
// select_backend (a test hook) must not race with running kernels.
std::atomic<const detail::KernelTable*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

void init_dispatch() {
  if (g_active.load(std::memory_order_acquire)) return;
#if defined(CF_HAVE_AVX2)
  if (avx2_supported()) {
    g_backend.store(Backend::Avx2, std::memory_order_relaxed);
    g_active.store(&detail::avx2_table(), std::memory_order_release);
    return;
  }
#endif
  g_backend.store(Backend::Scalar, std::memory_order_relaxed);
  g_active.store(&detail::scalar_table(), std::memory_order_release);
}

const detail::KernelTable& table() {
  init_dispatch();
  return *g_active.load(std::memory_order_acquire);
}

}  // namespace

namespace detail {

const KernelTable& scalar_table() {
  static const KernelTable t{dot_scalar,          gemm_nn_scalar,
                             gemm_nt_scalar,      center_rows_scalar,
                             mean_one_minus_sq_scalar, scale_scalar};
  return t;
}

}  // namespace detail

bool avx2_supported() {
#if defined(CF_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  init_dispatch();
  return g_backend.load(std::memory_order_relaxed);
}

void select_backend(Backend backend) {
  if (backend == Backend::Scalar) {
    g_backend.store(Backend::Scalar, std::memory_order_relaxed);
    g_active.store(&detail::scalar_table(), std::memory_order_release);
    return;
  }
#if defined(CF_HAVE_AVX2)
  if (avx2_supported()) {
    g_backend.store(Backend::Avx2, std::memory_order_relaxed);
    g_active.store(&detail::avx2_table(), std::memory_order_release);
    return;
  }
#endif
  throw std::runtime_error("kernels: AVX2 backend not available on this CPU");
}

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

void gemm_nn(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  table().gemm_nn(a, b, c, m, k, n);
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n) {
  table().gemm_nt(a, b, c, m, k, n);
}

void center_rows(double* x, std::size_t rows, std::size_t cols) {
  table().center_rows(x, rows, cols);
}

double mean_one_minus_sq(const double* g, std::size_t n) {
  return table().mean_one_minus_sq(g, n);
}

void scale(double* x, std::size_t n, double s) { table().scale(x, n, s); }

void tanh_inplace(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::tanh(x[i]);
}

}  // namespace causalfuzz::kernels
