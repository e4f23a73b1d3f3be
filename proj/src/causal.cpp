#include "causalfuzz/causal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "causalfuzz/kernels.hpp"
#include "causalfuzz/rng.hpp"

namespace causalfuzz {

namespace {

// Symmetric decorrelation: (M M^T)^{-1/2} M.
Matrix sym_decorrelate(const Matrix& m) {
  Matrix s = matmul_bt(m, m);
  const EigenDecomposition eig = eigen_symmetric(s);
  const std::size_t n = m.rows;
  const double max_ev = std::max(eig.values.back(), 1e-300);
  Matrix scaled_vt(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ev = std::max(eig.values[k], 1e-14 * max_ev);
    const double inv_sqrt = 1.0 / std::sqrt(ev);
    for (std::size_t j = 0; j < n; ++j)
      scaled_vt.at(k, j) = eig.vectors.at(j, k) * inv_sqrt;
  }
  Matrix inv_sqrt_s(n, n);
  // E diag(1/sqrt(ev)) E^T = E * scaled_vt
  kernels::gemm_nn(eig.vectors.data.data(), scaled_vt.data.data(),
                   inv_sqrt_s.data.data(), n, n, n);
  return matmul(inv_sqrt_s, m);
}

// Symmetric fixed-point ICA with tanh nonlinearity on whitened data z (n x q).
Matrix fast_ica(const Matrix& z, const DiscoveryConfig& cfg) {
  const std::size_t n = z.rows;
  const std::size_t q = z.cols;
  Rng rng(cfg.ica_seed);
  Matrix w(n, n);
  for (double& v : w.data) v = rng.gaussian();
  w = sym_decorrelate(w);

  Matrix y(n, q);
  Matrix gz(n, n);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    kernels::gemm_nn(w.data.data(), z.data.data(), y.data.data(), n, n, q);
    kernels::tanh_inplace(y.data.data(), n * q);
    std::vector<double> g_mean(n);
    for (std::size_t r = 0; r < n; ++r)
      g_mean[r] = kernels::mean_one_minus_sq(y.row(r), q);
    kernels::gemm_nt(y.data.data(), z.data.data(), gz.data.data(), n, q, n);
    Matrix w1(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        w1.at(i, j) = gz.at(i, j) / static_cast<double>(q) -
                      g_mean[i] * w.at(i, j);
    w1 = sym_decorrelate(w1);

    const Matrix prod = matmul_bt(w1, w);
    double lim = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      lim = std::max(lim, std::abs(std::abs(prod.at(i, i)) - 1.0));
    w = std::move(w1);
    if (lim < cfg.tolerance) break;
  }
  return w;
}

// Ascending |value| list of off-diagonal entries.
std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>>
sorted_entries(const Matrix& b) {
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> out;
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j)
      if (i != j) out.push_back({std::abs(b.at(i, j)), {i, j}});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  return out;
}

// Elimination order: repeatedly take the variable with no remaining parents.
bool try_order(const Matrix& b, std::vector<std::size_t>* order) {
  const std::size_t n = b.rows;
  std::vector<char> removed(n, 0);
  order->clear();
  for (std::size_t step = 0; step < n; ++step) {
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      if (removed[i]) continue;
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (!removed[j] && j != i) row_sum += std::abs(b.at(i, j));
      if (row_sum == 0.0) {
        order->push_back(i);
        removed[i] = 1;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Zero the smallest entries of b_hat until it permutes to strict lower
// triangular; returns that order over live variables. The classic n(n+1)/2
// prune count includes the n structural diagonal zeros, so n(n-1)/2
// off-diagonal entries go first.
std::vector<std::size_t> lower_triangular_order(Matrix b_hat) {
  const auto entries = sorted_entries(b_hat);
  const std::size_t n = b_hat.rows;
  std::size_t prune = std::min(entries.size(), n * (n - 1) / 2);
  for (std::size_t k = 0; k < prune; ++k)
    b_hat.at(entries[k].second.first, entries[k].second.second) = 0.0;
  std::vector<std::size_t> order;
  std::size_t next = prune;
  while (!try_order(b_hat, &order)) {
    if (next >= entries.size())
      throw std::logic_error("lingam: ordering failed on zero matrix");
    b_hat.at(entries[next].second.first, entries[next].second.second) = 0.0;
    ++next;
  }
  return order;
}

std::vector<double> ols_from_covariance(const Matrix& cov,
                                        const std::vector<std::size_t>& parents,
                                        std::size_t target) {
  const std::size_t p = parents.size();
  Matrix gram(p, p);
  std::vector<double> rhs(p);
  for (std::size_t a = 0; a < p; ++a) {
    rhs[a] = cov.at(target, parents[a]);
    for (std::size_t b = 0; b < p; ++b)
      gram.at(a, b) = cov.at(parents[a], parents[b]);
  }
  double trace_mean = 0.0;
  for (std::size_t a = 0; a < p; ++a) trace_mean += gram.at(a, a);
  trace_mean = std::max(trace_mean / static_cast<double>(p), 1e-30);
  for (double ridge : {1e-9, 1e-6, 1e-3}) {
    try {
      return solve_spd(gram, rhs, ridge * trace_mean);
    } catch (const std::runtime_error&) {
    }
  }
  return solve_spd(gram, rhs, 1.0 * trace_mean);
}

}  // namespace

std::size_t BinaryMatrix::edge_count() const {
  std::size_t n = 0;
  for (const auto v : values) n += v;
  return n;
}

std::vector<CausalEdge> CausalGraph::edges() const {
  std::vector<CausalEdge> out;
  for (std::size_t i = 0; i < binary.rows; ++i)
    for (std::size_t j = 0; j < binary.cols; ++j)
      if (binary.at(i, j))
        out.push_back({static_cast<int>(j), static_cast<int>(i),
                       weights.at(i, j)});
  return out;
}

CausalGraph discover(const Matrix& x, std::vector<std::string> labels,
                     VariableBlocks blocks, const DiscoveryConfig& cfg) {
  const std::size_t u = x.rows;
  const std::size_t q = x.cols;
  if (labels.size() != u || static_cast<std::size_t>(blocks.total()) != u)
    throw std::invalid_argument("discover: labels/blocks do not match matrix");
  if (q < 2) throw std::runtime_error("discover: need at least 2 samples");

  CausalGraph g;
  g.labels = std::move(labels);
  g.blocks = blocks;
  g.weights = Matrix(u, u);
  g.binary = BinaryMatrix(u, u);

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < u; ++i) {
    const double* row = x.row(i);
    const auto [mn, mx] = std::minmax_element(row, row + q);
    if (*mx - *mn > 0.0) live.push_back(i);
  }

  std::vector<std::size_t> dropped;
  {
    std::vector<char> is_live(u, 0);
    for (auto i : live) is_live[i] = 1;
    for (std::size_t i = 0; i < u; ++i)
      if (!is_live[i]) dropped.push_back(i);
  }

  if (live.empty()) {
    g.causal_order.resize(u);
    std::iota(g.causal_order.begin(), g.causal_order.end(), 0);
    return g;
  }

  const std::size_t ul = live.size();
  g.low_confidence = q < ul;

  Matrix xl(ul, q);
  for (std::size_t r = 0; r < ul; ++r)
    std::copy_n(x.row(live[r]), q, xl.row(r));
  if (cfg.jitter) {
    Rng jrng(cfg.ica_seed ^ 0x9e3779b97f4a7c15ULL);
    for (double& v : xl.data)
      v += jrng.uniform(-cfg.jitter_amplitude, cfg.jitter_amplitude);
  }
  kernels::center_rows(xl.data.data(), ul, q);

  Matrix cov = matmul_bt(xl, xl);
  kernels::scale(cov.data.data(), cov.data.size(), 1.0 / static_cast<double>(q));

  const EigenDecomposition eig = eigen_symmetric(cov);
  const double max_ev = eig.values.back();
  if (!(max_ev > 0.0))
    throw std::runtime_error("discover: singular whitening (no variance)");
  const double floor = 1e-10 * max_ev;
  std::vector<double> evs = eig.values;
  for (double& ev : evs) {
    if (ev < floor) {
      if (g.low_confidence) {
        ev = floor;  // rank-deficient by sample count; flagged, not fatal
      } else {
        throw std::runtime_error("discover: singular whitening");
      }
    }
  }

  Matrix whiten(ul, ul);  // K = D^{-1/2} E^T
  for (std::size_t k = 0; k < ul; ++k) {
    const double inv_sqrt = 1.0 / std::sqrt(evs[k]);
    for (std::size_t j = 0; j < ul; ++j)
      whiten.at(k, j) = eig.vectors.at(j, k) * inv_sqrt;
  }
  const Matrix z = matmul(whiten, xl);

  const Matrix w_ica = fast_ica(z, cfg);
  const Matrix w_unmix = matmul(w_ica, whiten);

  // Row permutation making the diagonal dominant (max product of |diag|).
  Matrix cost(ul, ul);
  for (std::size_t r = 0; r < ul; ++r)
    for (std::size_t i = 0; i < ul; ++i)
      cost.at(r, i) = 1.0 / (std::abs(w_unmix.at(r, i)) + 1e-12);
  const std::vector<int> assign = hungarian_assignment(cost);

  Matrix b_hat(ul, ul);
  for (std::size_t i = 0; i < ul; ++i) {
    const std::size_t r = static_cast<std::size_t>(assign[i]);
    double d = w_unmix.at(r, i);
    if (std::abs(d) < 1e-12) d = d < 0.0 ? -1e-12 : 1e-12;
    for (std::size_t j = 0; j < ul; ++j)
      b_hat.at(i, j) = (i == j ? 0.0 : -w_unmix.at(r, j) / d);
  }

  const std::vector<std::size_t> order_live = lower_triangular_order(b_hat);

  // Refit strengths by least squares on the order's predecessors, then drop
  // sub-threshold parents and refit the survivors until stable.
  Matrix w_live(ul, ul);
  for (std::size_t p = 1; p < ul; ++p) {
    const std::size_t target = order_live[p];
    std::vector<std::size_t> parents(order_live.begin(), order_live.begin() + p);
    std::vector<double> beta;
    for (std::size_t round = 0; round <= ul; ++round) {
      if (parents.empty()) break;
      beta = ols_from_covariance(cov, parents, target);
      std::vector<std::size_t> kept;
      std::vector<double> kept_beta;
      for (std::size_t a = 0; a < parents.size(); ++a) {
        if (std::abs(beta[a]) > cfg.binarize_threshold) {
          kept.push_back(parents[a]);
          kept_beta.push_back(beta[a]);
        }
      }
      const bool stable = kept.size() == parents.size();
      parents = std::move(kept);
      beta = std::move(kept_beta);
      if (stable) break;
    }
    for (std::size_t a = 0; a < parents.size(); ++a)
      w_live.at(target, parents[a]) = beta[a];
  }

  for (std::size_t i = 0; i < ul; ++i)
    for (std::size_t j = 0; j < ul; ++j)
      g.weights.at(live[i], live[j]) = w_live.at(i, j);
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < u; ++j)
      g.binary.at(i, j) =
          std::abs(g.weights.at(i, j)) > cfg.binarize_threshold ? 1 : 0;

  // Dropped (constant) variables come first as isolated exogenous nodes.
  g.causal_order.reserve(u);
  for (auto i : dropped) g.causal_order.push_back(static_cast<int>(i));
  for (auto p : order_live) g.causal_order.push_back(static_cast<int>(live[p]));
  return g;
}

CausalGraph discover(const ScenarioMatrix& x, const DiscoveryConfig& cfg) {
  return discover(x.values, x.labels, x.blocks, cfg);
}

bool respects_order(const BinaryMatrix& b, const std::vector<int>& order) {
  if (order.size() != b.rows) return false;
  std::vector<int> pos(order.size(), -1);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const int v = order[p];
    if (v < 0 || static_cast<std::size_t>(v) >= order.size() || pos[v] != -1)
      return false;
    pos[v] = static_cast<int>(p);
  }
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j)
      if (b.at(i, j) && pos[i] <= pos[j]) return false;
  return true;
}

bool is_acyclic(const BinaryMatrix& b) {
  const std::size_t n = b.rows;
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b.at(i, j)) ++indeg[i];
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  std::size_t seen = 0;
  while (!queue.empty()) {
    const std::size_t j = queue.back();
    queue.pop_back();
    ++seen;
    for (std::size_t i = 0; i < n; ++i) {
      if (b.at(i, j) && --indeg[i] == 0) queue.push_back(i);
    }
  }
  return seen == n;
}

BinaryMatrix subgraph_sa(const CausalGraph& g) {
  BinaryMatrix out(g.binary.rows, g.binary.cols);
  const int ns = g.blocks.scene;
  const int na = g.blocks.action;
  for (int i = ns; i < ns + na; ++i)
    for (int j = 0; j < ns; ++j)
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          g.binary.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

std::vector<CausalEdge> violation_signature(const CausalGraph& g) {
  std::vector<CausalEdge> out;
  const std::size_t u = g.u();
  const std::size_t first_violation =
      static_cast<std::size_t>(g.blocks.scene + g.blocks.action);
  for (std::size_t i = first_violation; i < u; ++i)
    for (std::size_t j = 0; j < u; ++j)
      if (g.binary.at(i, j))
        out.push_back({static_cast<int>(j), static_cast<int>(i),
                       g.weights.at(i, j)});
  return out;
}

double node_out_strength(const CausalGraph& g, int var_index) {
  if (var_index < 0 || var_index >= g.blocks.scene)
    throw std::invalid_argument("node_out_strength: not a scene variable");
  double sum = 0.0;
  for (std::size_t dst = static_cast<std::size_t>(g.blocks.scene);
       dst < g.u(); ++dst)
    sum += std::abs(g.weights.at(dst, static_cast<std::size_t>(var_index)));
  return sum;
}

AceVector ace_per_npc(const Trace& trace, const CausalGraph& g,
                      const AbstractionConfig& cfg) {
  std::vector<double> strengths(static_cast<std::size_t>(g.blocks.scene));
  for (int c = 0; c < g.blocks.scene; ++c)
    strengths[static_cast<std::size_t>(c)] = node_out_strength(g, c);

  const auto idx = sampled_steps(trace.steps.size(), cfg.stride);
  const std::size_t npc_count =
      trace.steps.empty() ? 0 : trace.steps.front().npcs.size();
  AceVector ace;
  ace.values.assign(npc_count, 0.0);
  if (idx.empty()) return ace;
  for (std::size_t k = 0; k < npc_count; ++k) {
    double sum = 0.0;
    for (const std::size_t t : idx) {
      const SceneVector sv = scene_vector_of_npc(trace.steps[t], k, cfg);
      for (std::size_t c = 0; c < sv.size(); ++c)
        if (sv[c]) sum += strengths[c];
    }
    ace.values[k] = sum / static_cast<double>(idx.size());
  }
  return ace;
}

}  // namespace causalfuzz
