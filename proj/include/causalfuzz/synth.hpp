#pragma once

#include <cstdint>
#include <vector>

#include "causalfuzz/causal.hpp"
#include "causalfuzz/linalg.hpp"
#include "causalfuzz/rng.hpp"

namespace causalfuzz {

enum class NoiseKind { Uniform, Laplace, Gaussian };

struct SynthDataset {
  Matrix x;                    // u x q samples of x = W x + e
  Matrix w_true;               // ground-truth strengths
  BinaryMatrix b_true;         // nonzero pattern of w_true
  std::vector<int> order;      // a causal order of w_true
};

// Samples q columns from the linear model x = W x + e with unit-variance
// noise of the requested kind. Throws std::invalid_argument when w is cyclic.
SynthDataset synth_dataset(const Matrix& w, NoiseKind noise, int q,
                           std::uint64_t seed);

// Random chain x1 -> x2 -> ... -> xu with coefficient magnitudes in
// [coef_min, coef_max] and random signs.
Matrix make_chain(int u, Rng& rng, double coef_min = 0.6,
                  double coef_max = 1.4);

// Random strictly-lower-triangular model over a shuffled variable order with
// the given edge probability.
Matrix make_random_dag(int u, double edge_prob, Rng& rng,
                       double coef_min = 0.6, double coef_max = 1.4);

}  // namespace causalfuzz
