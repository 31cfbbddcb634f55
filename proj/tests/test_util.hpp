#pragma once

// Shared fixtures for the test suites: bundled-map loading and hand-built
// scenarios on the straight two-lane road.

#include <string>

#include "scenfuzz/map.hpp"
#include "scenfuzz/route.hpp"
#include "scenfuzz/scenario.hpp"

namespace testutil {

inline std::string data_path(const std::string& rel) {
  return std::string(SCENFUZZ_DATA_DIR) + "/" + rel;
}

inline const scenfuzz::LaneMap& straight2() {
  static const scenfuzz::LaneMap m = scenfuzz::load_map(data_path("maps/straight2.json"));
  return m;
}

inline const scenfuzz::LaneMap& crossmap() {
  static const scenfuzz::LaneMap m = scenfuzz::load_map(data_path("maps/crossmap.json"));
  return m;
}

inline const scenfuzz::LaneMap& grid() {
  static const scenfuzz::LaneMap m = scenfuzz::load_map(data_path("maps/grid.json"));
  return m;
}

/// Ego-only scenario driving lane 1 of the straight road from arc a to b.
inline scenfuzz::Scenario straight_scenario(double a = 0.0, double b = 95.0) {
  scenfuzz::Scenario s;
  s.ego_route = scenfuzz::build_lane_route(straight2(), {1}, a, b);
  s.weather = {};
  return s;
}

}  // namespace testutil
