#pragma once

#include <cstddef>
#include <vector>

namespace causalfuzz {

// Dense row-major matrix of doubles. Heavy products route through the
// kernels backend.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& a, const Matrix& b);        // a * b
Matrix matmul_bt(const Matrix& a, const Matrix& b);     // a * b^T
Matrix transpose(const Matrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

// Cyclic Jacobi rotations for a symmetric matrix. Deterministic.
EigenDecomposition eigen_symmetric(const Matrix& s, int max_sweeps = 64);

// Solve (G + ridge*I) x = rhs for symmetric positive definite G (Cholesky).
std::vector<double> solve_spd(const Matrix& g, const std::vector<double>& rhs,
                              double ridge = 0.0);

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns assignment[col] = row.
std::vector<int> hungarian_assignment(const Matrix& cost);

}  // namespace causalfuzz
