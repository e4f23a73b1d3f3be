#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalfuzz/abstraction.hpp"
#include "causalfuzz/linalg.hpp"

namespace causalfuzz {

struct BinaryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> values;

  BinaryMatrix() = default;
  BinaryMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0) {}

  std::uint8_t& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::size_t edge_count() const;
  bool operator==(const BinaryMatrix&) const = default;
};

struct CausalEdge {
  int src = 0;
  int dst = 0;
  double weight = 0.0;
};

struct DiscoveryConfig {
  double binarize_threshold = 0.05;  // tau_w
  int max_iterations = 200;          // fixed-point ICA cap
  double tolerance = 1e-10;          // ICA convergence limit
  std::uint64_t ica_seed = 7;        // deterministic initialization
  bool jitter = true;                // stabilizes whitening of binary rows
  double jitter_amplitude = 1e-3;
};

// Weighted adjacency W with w(i, j) = causal strength of x_j -> x_i, its
// binarization B, and a causal order under which B is strictly lower
// triangular (so B is a DAG by construction).
struct CausalGraph {
  std::vector<std::string> labels;
  VariableBlocks blocks;
  Matrix weights;
  BinaryMatrix binary;
  std::vector<int> causal_order;  // exogenous variables first
  bool low_confidence = false;

  std::size_t u() const { return weights.rows; }
  std::vector<CausalEdge> edges() const;
};

// ICA-LiNGAM: center, whiten, fixed-point ICA with a deterministic seed,
// permutation/scaling resolution, lower-triangularization, and a least-squares
// refit of the strengths along the found order. Constant rows are dropped
// first and re-embedded as isolated nodes. Throws on singular whitening;
// returns a low-confidence graph when there are fewer samples than live
// variables.
CausalGraph discover(const Matrix& x, std::vector<std::string> labels,
                     VariableBlocks blocks, const DiscoveryConfig& cfg = {});
CausalGraph discover(const ScenarioMatrix& x, const DiscoveryConfig& cfg = {});

// True when every edge of b goes from an earlier to a later variable in
// `order` (order is a permutation of all variables).
bool respects_order(const BinaryMatrix& b, const std::vector<int>& order);
bool is_acyclic(const BinaryMatrix& b);

// Zeroes every entry except scene-source -> action-target ones.
BinaryMatrix subgraph_sa(const CausalGraph& g);

// Edges whose target is a violation variable.
std::vector<CausalEdge> violation_signature(const CausalGraph& g);

// Sum of |w| over edges leaving scene variable `var_index` into the action
// and violation blocks.
double node_out_strength(const CausalGraph& g, int var_index);

struct AceVector {
  std::vector<double> values;  // one nonnegative entry per NPC
};

// Average causal effect of each NPC on the ego: the per-cell out-strengths
// weighted by that NPC's cell occupancy, averaged over the sampled instants.
AceVector ace_per_npc(const Trace& trace, const CausalGraph& g,
                      const AbstractionConfig& cfg);

}  // namespace causalfuzz
