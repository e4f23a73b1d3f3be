#include "causalfuzz/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causalfuzz {

OracleResult oracle(const Trace& trace, const Vec2& destination,
                    double theta_p) {
  const bool arrived =
      distance(trace.final_ego_position(), destination) <= theta_p;
  const bool collision_free = trace.min_bb_distance > 0.0;
  return (arrived && collision_free) ? OracleResult::Passed
                                     : OracleResult::Violated;
}

double violation_degree(const Trace& trace, const Vec2& destination) {
  const double f_collision = trace.min_bb_distance;
  const double final_dist = distance(trace.final_ego_position(), destination);
  const double f_destination = std::max(10.0 - final_dist, 0.0);
  return f_collision + f_destination;
}

double graph_distance(const BinaryMatrix& a, const BinaryMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("graph_distance: shape mismatch");
  long long na = 0, nb = 0, nab = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    na += a.values[i];
    nb += b.values[i];
    nab += a.values[i] & b.values[i];
  }
  if (na == 0 && nb == 0) return 0.0;
  if (na == 0 || nb == 0) return 1.0;
  // sqrt of the exact integer product keeps distance(b, b) at exactly 0.
  const double cosine =
      static_cast<double>(nab) / std::sqrt(static_cast<double>(na * nb));
  return 1.0 - cosine;
}

double min_distance_to_set(const BinaryMatrix& b,
                           const std::vector<BinaryMatrix>& set) {
  if (set.empty()) return 1.0;
  double best = graph_distance(b, set.front());
  for (std::size_t i = 1; i < set.size(); ++i)
    best = std::min(best, graph_distance(b, set[i]));
  return best;
}

FeedbackRecord evaluate_feedback(const Trace& trace, const Vec2& destination,
                                 const BinaryMatrix& b_sa,
                                 const BinaryMatrix& b_sav,
                                 const std::vector<BinaryMatrix>& sac_set,
                                 const std::vector<BinaryMatrix>& savc_set,
                                 double theta_p) {
  FeedbackRecord out;
  out.ts = min_distance_to_set(b_sa, sac_set);
  out.vd = min_distance_to_set(b_sav, savc_set);
  out.f_collision = trace.min_bb_distance;
  out.f_destination =
      std::max(10.0 - distance(trace.final_ego_position(), destination), 0.0);
  out.degree = out.f_collision + out.f_destination;
  out.violated = oracle(trace, destination, theta_p) == OracleResult::Violated;
  return out;
}

}  // namespace causalfuzz
