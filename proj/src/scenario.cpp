#include "causalfuzz/scenario.hpp"

#include <stdexcept>

namespace causalfuzz {

void ScenarioSpec::validate(double npc_max_speed) const {
  map.validate();
  if (dt <= 0.0) throw std::invalid_argument("scenario: dt must be > 0");
  if (duration_limit <= 0.0)
    throw std::invalid_argument("scenario: duration_limit must be > 0");
  if (npcs.empty()) throw std::invalid_argument("scenario: needs >= 1 NPC");
  if (ego.route.empty())
    throw std::invalid_argument("scenario: ego route is empty");
  for (const auto& id : ego.route) {
    if (!map.find(id))
      throw std::invalid_argument("scenario: route lane '" + id +
                                  "' not in map");
  }
  if (!map.on_map(ego.start_position))
    throw std::invalid_argument("scenario: ego start off the map");
  if (!map.on_map(ego.destination))
    throw std::invalid_argument("scenario: destination off the map");
  for (std::size_t k = 0; k < npcs.size(); ++k) {
    const NpcSpec& npc = npcs[k];
    if (npc.waypoints.size() < 2)
      throw std::invalid_argument("scenario: NPC " + std::to_string(k) +
                                  " needs >= 2 waypoints");
    if (npc.length <= 0.0 || npc.width <= 0.0)
      throw std::invalid_argument("scenario: NPC " + std::to_string(k) +
                                  " has non-positive extents");
    for (const NpcWaypoint& wp : npc.waypoints) {
      if (wp.speed < 0.0 || wp.speed > npc_max_speed)
        throw std::invalid_argument("scenario: NPC " + std::to_string(k) +
                                    " waypoint speed out of [0, v_max]");
      if (!map.on_map(wp.position))
        throw std::invalid_argument("scenario: NPC " + std::to_string(k) +
                                    " waypoint off the map");
    }
  }
}

}  // namespace causalfuzz
