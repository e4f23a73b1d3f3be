#pragma once

#include <vector>

#include "causalfuzz/causal.hpp"
#include "causalfuzz/scenario.hpp"

namespace causalfuzz {

enum class OracleResult { Passed, Violated };

// Passing condition: final ego position within theta_p of the destination and
// a strictly positive minimum bounding-box distance over the whole run.
OracleResult oracle(const Trace& trace, const Vec2& destination,
                    double theta_p = 1.0);

// d^s = min bounding-box distance + clamp(10 - final distance to destination,
// 0, 10). Lower means closer to a violation.
double violation_degree(const Trace& trace, const Vec2& destination);

// 1 - cosine similarity of the flattened matrices. Both all-zero -> 0;
// exactly one all-zero -> 1. Throws on shape mismatch.
double graph_distance(const BinaryMatrix& a, const BinaryMatrix& b);

// Minimum graph_distance against the set; an empty set scores 1.
double min_distance_to_set(const BinaryMatrix& b,
                           const std::vector<BinaryMatrix>& set);

struct FeedbackRecord {
  double ts = 1.0;             // testing sufficiency vs the SAC set
  double vd = 1.0;             // violation diversity vs the SAVC set
  double degree = 0.0;         // d^s
  double f_collision = 0.0;    // min bounding-box distance term
  double f_destination = 0.0;  // clamped destination shortfall term
  bool violated = false;
};

FeedbackRecord evaluate_feedback(const Trace& trace, const Vec2& destination,
                                 const BinaryMatrix& b_sa,
                                 const BinaryMatrix& b_sav,
                                 const std::vector<BinaryMatrix>& sac_set,
                                 const std::vector<BinaryMatrix>& savc_set,
                                 double theta_p = 1.0);

}  // namespace causalfuzz
