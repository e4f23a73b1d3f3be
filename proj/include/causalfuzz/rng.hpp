#pragma once

#include <array>
#include <cstdint>

namespace causalfuzz {

// xoshiro256** with an explicit, serializable state. Used everywhere instead
// of <random> so that streams are identical across platforms and the campaign
// state can be checkpointed.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform01();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  // Standard normal via Box-Muller (two draws per call, no cached spare).
  double gaussian();
  // Zero-mean Laplace with scale b.
  double laplace(double b);
  bool bernoulli(double p) { return uniform01() < p; }

  std::array<std::uint64_t, 4> state() const { return state_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace causalfuzz
