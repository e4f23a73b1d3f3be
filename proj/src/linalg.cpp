#include "causalfuzz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "causalfuzz/kernels.hpp"

namespace causalfuzz {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix c(a.rows, b.cols);
  kernels::gemm_nn(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols,
                   b.cols);
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_bt: shape mismatch");
  Matrix c(a.rows, b.rows);
  kernels::gemm_nt(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols,
                   b.rows);
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

EigenDecomposition eigen_symmetric(const Matrix& s, int max_sweeps) {
  if (s.rows != s.cols) throw std::invalid_argument("eigen: not square");
  const std::size_t n = s.rows;
  Matrix a = s;
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
    if (off < 1e-24) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - sn * akq;
          a.at(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk - sn * aqk;
          a.at(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - sn * vkq;
          v.at(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a.at(i, i) < a.at(j, j);
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a.at(idx[k], idx[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors.at(r, k) = v.at(r, idx[k]);
  }
  return out;
}

std::vector<double> solve_spd(const Matrix& g, const std::vector<double>& rhs,
                              double ridge) {
  const std::size_t n = g.rows;
  if (g.cols != n || rhs.size() != n)
    throw std::invalid_argument("solve_spd: shape mismatch");
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = g.at(i, j) + (i == j ? ridge : 0.0);
      for (std::size_t k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (sum <= 0.0)
          throw std::runtime_error("solve_spd: matrix not positive definite");
        l.at(i, i) = std::sqrt(sum);
      } else {
        l.at(i, j) = sum / l.at(j, j);
      }
    }
  }
  std::vector<double> y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = rhs[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l.at(i, k) * y[k];
    y[i] = sum / l.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l.at(k, ii) * x[k];
    x[ii] = sum / l.at(ii, ii);
  }
  return x;
}

std::vector<int> hungarian_assignment(const Matrix& cost) {
  if (cost.rows != cost.cols)
    throw std::invalid_argument("hungarian: cost matrix not square");
  const int n = static_cast<int>(cost.rows);
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials-based O(n^3) formulation; 1-indexed with a dummy column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[j - 1] = p[j] - 1;
  return assignment;
}

}  // namespace causalfuzz
