#include "doctest.h"

#include <cmath>

#include "causalfuzz/linalg.hpp"
#include "causalfuzz/rng.hpp"

#if defined(CF_HAVE_EIGEN_ORACLE)
#include <Eigen/Dense>
#endif

using namespace causalfuzz;

namespace {

Matrix random_spd(std::size_t n, Rng& rng) {
  Matrix a(n, n);
  for (double& v : a.data) v = rng.uniform(-1.0, 1.0);
  Matrix s = matmul_bt(a, a);
  for (std::size_t i = 0; i < n; ++i) s.at(i, i) += 0.5;
  return s;
}

}  // namespace

TEST_CASE("jacobi eigensolver reconstructs a symmetric matrix") {
  Rng rng(11);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    const Matrix s = random_spd(n, rng);
    const EigenDecomposition eig = eigen_symmetric(s);
    // V diag(values) V^T == S
    Matrix vd(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        vd.at(i, k) = eig.vectors.at(i, k) * eig.values[k];
    const Matrix back = matmul_bt(vd, eig.vectors);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(back.at(i, j) == doctest::Approx(s.at(i, j)).epsilon(1e-9));
    for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k] >= eig.values[k - 1]);
  }
}

TEST_CASE("cholesky solve inverts spd systems") {
  Rng rng(12);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const Matrix g = random_spd(n, rng);
    std::vector<double> x_true(n);
    for (double& v : x_true) v = rng.uniform(-3, 3);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rhs[i] += g.at(i, j) * x_true[j];
    const auto x = solve_spd(g, rhs);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-7));
  }
}

TEST_CASE("hungarian finds the cheapest assignment") {
  Matrix cost(3, 3);
  const double entries[9] = {4, 1, 3, 2, 0, 5, 3, 2, 2};
  std::copy(entries, entries + 9, cost.data.begin());
  const auto assign = hungarian_assignment(cost);
  // Optimal matching costs 5: rows (0,1,2) -> cols (1,0,2).
  double total = 0.0;
  std::vector<char> used(3, 0);
  for (int c = 0; c < 3; ++c) {
    CHECK(!used[static_cast<std::size_t>(assign[c])]);
    used[static_cast<std::size_t>(assign[c])] = 1;
    total += cost.at(static_cast<std::size_t>(assign[c]),
                     static_cast<std::size_t>(c));
  }
  CHECK(total == doctest::Approx(5.0));
}

#if defined(CF_HAVE_EIGEN_ORACLE)
TEST_CASE("eigensolver agrees with Eigen on random symmetric matrices") {
  Rng rng(13);
  for (int round = 0; round < 8; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 16));
    const Matrix s = random_spd(n, rng);
    Eigen::MatrixXd es(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        es(static_cast<long>(i), static_cast<long>(j)) = s.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(es);
    const EigenDecomposition mine = eigen_symmetric(s);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(mine.values[k] ==
            doctest::Approx(solver.eigenvalues()(static_cast<long>(k)))
                .epsilon(1e-8));
  }
}
#endif
