#include "doctest.h"

#include <cmath>

#include "causalfuzz/abstraction.hpp"
#include "causalfuzz/rng.hpp"

using namespace causalfuzz;

namespace {

VehicleState state_at(Vec2 pos, double heading = 0.0, double speed = 0.0,
                      double accel = 0.0) {
  VehicleState s;
  s.position = pos;
  s.heading = heading;
  s.speed = speed;
  s.accel = accel;
  return s;
}

Trace synthetic_trace(std::size_t steps, bool collide_at_end) {
  Trace trace;
  trace.dt = 0.1;
  trace.destination = {400, 0};
  for (std::size_t t = 0; t < steps; ++t) {
    TraceStep step;
    step.ego = state_at({static_cast<double>(t), 0}, 0.0, 10.0, 0.0);
    step.npcs = {state_at({static_cast<double>(t) + 20.0, 0}),
                 state_at({static_cast<double>(t) + 8.0, 3.5})};
    if (collide_at_end && t + 1 == steps) {
      step.collision = true;
      step.fault_npc = 1;
      step.colliding_npc = 0;
    }
    trace.steps.push_back(std::move(step));
  }
  trace.terminal =
      collide_at_end ? TerminalReason::Collision : TerminalReason::Timeout;
  trace.min_bb_distance = collide_at_end ? 0.0 : 3.0;
  return trace;
}

}  // namespace

TEST_CASE("empty surroundings abstract to the zero vector") {
  const AbstractionConfig cfg;
  const SceneVector sv = abstract_scene(state_at({0, 0}), {}, cfg);
  CHECK(sv.size() == 32);
  for (const auto b : sv) CHECK(b == 0);
}

TEST_CASE("NPC dead ahead at 30 m lands in cell 10 (m=8, n=4, L=50)") {
  const AbstractionConfig cfg;
  const VehicleState ego = state_at({0, 0}, 0.0);
  const VehicleState npc = state_at({30, 0});
  const SceneVector sv = abstract_scene(ego, {npc}, cfg);
  for (std::size_t c = 0; c < sv.size(); ++c) CHECK(sv[c] == (c == 10 ? 1 : 0));
}

TEST_CASE("occupancy is binary and permutation-invariant") {
  const AbstractionConfig cfg;
  const VehicleState ego = state_at({0, 0});
  const VehicleState a = state_at({30, 0.5});
  const VehicleState b = state_at({31, -0.5});
  const SceneVector ab = abstract_scene(ego, {a, b}, cfg);
  const SceneVector ba = abstract_scene(ego, {b, a}, cfg);
  CHECK(ab == ba);
  for (const auto v : ab) CHECK(v <= 1);
}

TEST_CASE("action thresholds, per the configured 0.1 / -0.1 / 0.1") {
  const AbstractionConfig cfg;
  VehicleState prev = state_at({0, 0}, 1.0);
  SUBCASE("acceleration only") {
    const VehicleState cur = state_at({1, 0}, 1.0, 10.0, 0.2);
    const ActionVector a = abstract_action(&prev, cur, cfg);
    CHECK(a == ActionVector{1, 0, 0, 0, 0});
  }
  SUBCASE("heading increase is a right turn") {
    const VehicleState cur = state_at({1, 0}, 1.15, 10.0, 0.05);
    const ActionVector a = abstract_action(&prev, cur, cfg);
    CHECK(a == ActionVector{0, 0, 0, 1, 0});
  }
  SUBCASE("uniform linear motion maintains") {
    const VehicleState cur = state_at({1, 0}, 1.0, 10.0, 0.0);
    const ActionVector a = abstract_action(&prev, cur, cfg);
    CHECK(a == ActionVector{0, 0, 0, 0, 1});
  }
  SUBCASE("t = 0 abstracts to zeros") {
    const ActionVector a = abstract_action(nullptr, prev, cfg);
    CHECK(a == ActionVector{0, 0, 0, 0, 0});
  }
}

TEST_CASE("action mutual exclusions hold for random inputs") {
  const AbstractionConfig cfg;
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    VehicleState prev = state_at({0, 0}, rng.uniform(0, 6.28));
    VehicleState cur = prev;
    cur.heading = wrap_angle_2pi(prev.heading + rng.uniform(-0.5, 0.5));
    cur.accel = rng.uniform(-2, 2);
    const ActionVector a = abstract_action(&prev, cur, cfg);
    CHECK(a[0] * a[1] == 0);
    CHECK(a[2] * a[3] == 0);
    const bool any = a[0] || a[1] || a[2] || a[3];
    CHECK(a[4] == (any ? 0 : 1));
  }
}

TEST_CASE("violation abstraction maps fault flags") {
  TraceStep step;
  CHECK(abstract_violation(step) == ViolationVector{0, 0});
  step.collision = true;
  step.fault_ego = 1;
  CHECK(abstract_violation(step) == ViolationVector{1, 0});
  step.fault_ego = 0;
  step.fault_npc = 1;
  CHECK(abstract_violation(step) == ViolationVector{0, 1});
}

TEST_CASE("scenario matrix dimensions and final-column violation") {
  const AbstractionConfig cfg;
  const Trace trace = synthetic_trace(300, true);
  const ScenarioMatrix m = abstract_scenario(trace, cfg);
  CHECK(m.values.rows == 39);
  CHECK(m.values.cols == 300);
  CHECK(m.labels.size() == 39);
  // Violation block of the last column is nonzero.
  double tail = 0.0;
  for (std::size_t r = 37; r < 39; ++r) tail += m.values.at(r, 299);
  CHECK(tail == doctest::Approx(1.0));
  for (const double v : m.values.data) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("sampling stride keeps the final step and ceil(t/stride) columns") {
  CHECK(sampled_steps(10, 3) == std::vector<std::size_t>{0, 3, 6, 9});
  CHECK(sampled_steps(9, 3) == std::vector<std::size_t>{2, 5, 8});
  CHECK(sampled_steps(300, 1).size() == 300);
  AbstractionConfig cfg;
  cfg.stride = 7;
  const Trace trace = synthetic_trace(100, false);
  const ScenarioMatrix m = abstract_scenario(trace, cfg);
  CHECK(m.values.cols == (100 + 6) / 7);
}

TEST_CASE("too-short traces are rejected") {
  const AbstractionConfig cfg;
  const Trace trace = synthetic_trace(1, false);
  CHECK_THROWS(abstract_scenario(trace, cfg));
}

TEST_CASE("randomized scene invariants: OR-decomposition and rotation") {
  const AbstractionConfig cfg;
  Rng rng(7);
  for (int round = 0; round < 10000; ++round) {
    TraceStep step;
    step.ego = state_at({rng.uniform(-50, 50), rng.uniform(-50, 50)},
                        rng.uniform(0, 6.28));
    const int n = rng.uniform_int(1, 5);
    for (int k = 0; k < n; ++k)
      step.npcs.push_back(state_at({step.ego.position.x + rng.uniform(-70, 70),
                                    step.ego.position.y + rng.uniform(-70, 70)},
                                   rng.uniform(0, 6.28)));

    const SceneVector full = abstract_scene(step.ego, step.npcs, cfg);
    CHECK(full.size() == static_cast<std::size_t>(cfg.cell_count()));

    SceneVector merged(full.size(), 0);
    for (std::size_t k = 0; k < step.npcs.size(); ++k) {
      const SceneVector sk = scene_vector_of_npc(step, k, cfg);
      std::size_t bits = 0;
      for (std::size_t c = 0; c < sk.size(); ++c) {
        bits += sk[c];
        merged[c] |= sk[c];
      }
      CHECK(bits <= 1);
    }
    CHECK(merged == full);

    // Rotating the whole world preserves the local-frame representation.
    const double phi = rng.uniform(0, 6.28);
    TraceStep rotated;
    rotated.ego = step.ego;
    rotated.ego.position = step.ego.position.rotated(phi);
    rotated.ego.heading = wrap_angle_2pi(step.ego.heading + phi);
    for (const VehicleState& npc : step.npcs) {
      VehicleState r = npc;
      r.position = npc.position.rotated(phi);
      r.heading = wrap_angle_2pi(npc.heading + phi);
      rotated.npcs.push_back(r);
    }
    const SceneVector rot = abstract_scene(rotated.ego, rotated.npcs, cfg);
    CHECK(rot == full);
  }
}

TEST_CASE("per-NPC scene vector out of range is zero") {
  const AbstractionConfig cfg;
  TraceStep step;
  step.ego = state_at({0, 0});
  step.npcs = {state_at({cfg.perception_range + 1.0, 0})};
  const SceneVector sv = scene_vector_of_npc(step, 0, cfg);
  for (const auto b : sv) CHECK(b == 0);
}

TEST_CASE("permuting NPC identities leaves the scenario matrix unchanged") {
  const AbstractionConfig cfg;
  Trace trace = synthetic_trace(60, false);
  Trace permuted = trace;
  for (TraceStep& step : permuted.steps) std::swap(step.npcs[0], step.npcs[1]);
  const ScenarioMatrix a = abstract_scenario(trace, cfg);
  const ScenarioMatrix b = abstract_scenario(permuted, cfg);
  CHECK(a.values.data == b.values.data);
}
