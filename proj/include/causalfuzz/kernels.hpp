#pragma once

#include <cstddef>

// Dense inner loops used by the causal-discovery pipeline. Scalar reference
// implementations always exist; an AVX2 backend is selected at runtime when
// the CPU supports it. Backends are equivalence-tested against each other.
namespace causalfuzz::kernels {

enum class Backend { Scalar, Avx2 };

bool avx2_supported();
Backend active_backend();
// Throws std::runtime_error if the backend is not available on this CPU.
void select_backend(Backend backend);

double dot(const double* a, const double* b, std::size_t n);

// C = A * B. A is m x k, B is k x n, C is m x n, all row-major.
void gemm_nn(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n);

// C = A * B^T. A is m x k, B is n x k, C is m x n, all row-major.
void gemm_nt(const double* a, const double* b, double* c, std::size_t m,
             std::size_t k, std::size_t n);

// Subtract each row's mean from that row.
void center_rows(double* x, std::size_t rows, std::size_t cols);

// mean over i of (1 - g[i]^2); g already holds tanh values.
double mean_one_minus_sq(const double* g, std::size_t n);

void scale(double* x, std::size_t n, double s);

// Elementwise tanh. Transcendental, kept scalar in every backend so results
// do not depend on the selected backend.
void tanh_inplace(double* x, std::size_t n);

namespace detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*gemm_nn)(const double*, const double*, double*, std::size_t,
                  std::size_t, std::size_t);
  void (*gemm_nt)(const double*, const double*, double*, std::size_t,
                  std::size_t, std::size_t);
  void (*center_rows)(double*, std::size_t, std::size_t);
  double (*mean_one_minus_sq)(const double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
};

const KernelTable& scalar_table();
#if defined(CF_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace detail

}  // namespace causalfuzz::kernels
