#include "causalfuzz/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace causalfuzz {

namespace {

const double kUniformHalfWidth = std::sqrt(3.0);      // unit variance
const double kLaplaceScale = 1.0 / std::sqrt(2.0);    // unit variance

std::vector<int> topological_order(const Matrix& w) {
  const std::size_t n = w.rows;
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && w.at(i, j) != 0.0) ++indeg[i];
  std::vector<int> order;
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end());
    const std::size_t j = ready.front();
    ready.erase(ready.begin());
    order.push_back(static_cast<int>(j));
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j && w.at(i, j) != 0.0 && --indeg[i] == 0) ready.push_back(i);
    }
  }
  if (order.size() != n)
    throw std::invalid_argument("synth: ground-truth matrix is cyclic");
  return order;
}

double draw_noise(Rng& rng, NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Uniform:
      return rng.uniform(-kUniformHalfWidth, kUniformHalfWidth);
    case NoiseKind::Laplace:
      return rng.laplace(kLaplaceScale);
    case NoiseKind::Gaussian:
      return rng.gaussian();
  }
  return 0.0;
}

}  // namespace

SynthDataset synth_dataset(const Matrix& w, NoiseKind noise, int q,
                           std::uint64_t seed) {
  if (w.rows != w.cols) throw std::invalid_argument("synth: W must be square");
  if (q < 1) throw std::invalid_argument("synth: q must be >= 1");
  const std::size_t u = w.rows;

  SynthDataset out;
  out.w_true = w;
  out.order = topological_order(w);
  out.b_true = BinaryMatrix(u, u);
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < u; ++j)
      out.b_true.at(i, j) = (i != j && w.at(i, j) != 0.0) ? 1 : 0;

  out.x = Matrix(u, static_cast<std::size_t>(q));
  Rng rng(seed);
  std::vector<double> sample(u);
  for (int col = 0; col < q; ++col) {
    for (const int vi : out.order) {
      const auto i = static_cast<std::size_t>(vi);
      double v = draw_noise(rng, noise);
      for (std::size_t j = 0; j < u; ++j)
        if (w.at(i, j) != 0.0) v += w.at(i, j) * sample[j];
      sample[i] = v;
    }
    for (std::size_t i = 0; i < u; ++i)
      out.x.at(i, static_cast<std::size_t>(col)) = sample[i];
  }
  return out;
}

Matrix make_chain(int u, Rng& rng, double coef_min, double coef_max) {
  Matrix w(static_cast<std::size_t>(u), static_cast<std::size_t>(u));
  for (int i = 1; i < u; ++i) {
    const double mag = rng.uniform(coef_min, coef_max);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    w.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i - 1)) =
        sign * mag;
  }
  return w;
}

Matrix make_random_dag(int u, double edge_prob, Rng& rng, double coef_min,
                       double coef_max) {
  std::vector<int> order(static_cast<std::size_t>(u));
  std::iota(order.begin(), order.end(), 0);
  for (int i = u - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
  Matrix w(static_cast<std::size_t>(u), static_cast<std::size_t>(u));
  for (int a = 0; a < u; ++a) {
    for (int b = a + 1; b < u; ++b) {
      if (!rng.bernoulli(edge_prob)) continue;
      const double mag = rng.uniform(coef_min, coef_max);
      const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      w.at(static_cast<std::size_t>(order[static_cast<std::size_t>(b)]),
           static_cast<std::size_t>(order[static_cast<std::size_t>(a)])) =
          sign * mag;
    }
  }
  return w;
}

}  // namespace causalfuzz
