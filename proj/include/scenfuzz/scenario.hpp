#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenfuzz/map.hpp"
#include "scenfuzz/route.hpp"
#include "scenfuzz/types.hpp"

namespace scenfuzz {

inline constexpr double kMinSpawnSpacing = 2.0;

/// The chromosome: ego route, NPC routes, pedestrian routes, weather.
struct Scenario {
  std::uint64_t id = 0;
  std::vector<std::uint64_t> parent_ids;
  Route ego_route;
  std::vector<Route> npc_routes;
  std::vector<Route> pedestrian_routes;
  WeatherParams weather;

  std::size_t vehicle_count() const { return 1 + npc_routes.size(); }

  /// Spawn positions in actor order: ego, NPCs, pedestrians.
  std::vector<Vec2> spawn_positions() const {
    std::vector<Vec2> out;
    out.push_back(ego_route.start());
    for (const auto& r : npc_routes) out.push_back(r.start());
    for (const auto& r : pedestrian_routes) out.push_back(r.start());
    return out;
  }
};

struct ScenarioBounds {
  std::size_t max_npcs = 8;
  std::size_t max_pedestrians = 20;
};

/// First pair of actors closer than kMinSpawnSpacing, or (-1,-1).
inline std::pair<int, int> spawn_overlap(const Scenario& s) {
  const auto pos = s.spawn_positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      if (dist(pos[i], pos[j]) < kMinSpawnSpacing) return {static_cast<int>(i), static_cast<int>(j)};
    }
  }
  return {-1, -1};
}

/// Full Scenario invariant check. Throws ValidationError on the first
/// violated rule.
inline void validate_scenario(const LaneMap& map, const Scenario& s,
                              const ScenarioBounds& bounds = {}) {
  if (!s.ego_route.valid()) throw ValidationError("scenario: ego route is degenerate");
  if (s.npc_routes.size() > bounds.max_npcs) throw ValidationError("scenario: too many NPC routes");
  if (s.pedestrian_routes.size() > bounds.max_pedestrians) {
    throw ValidationError("scenario: too many pedestrian routes");
  }
  const auto check_on_lane = [&](const Route& r, const std::string& who) {
    if (!r.valid()) throw ValidationError("scenario: " + who + " route is degenerate");
    const auto near = map.nearest_lane(r.start(), 30.0);
    if (near.lane_index < 0 ||
        near.distance > map.lanes[static_cast<std::size_t>(near.lane_index)].width * 0.5 + 0.5) {
      throw ValidationError("scenario: " + who + " route starts off-road");
    }
  };
  check_on_lane(s.ego_route, "ego");
  for (std::size_t i = 0; i < s.npc_routes.size(); ++i) {
    check_on_lane(s.npc_routes[i], "npc" + std::to_string(i));
  }
  for (std::size_t i = 0; i < s.pedestrian_routes.size(); ++i) {
    const auto& r = s.pedestrian_routes[i];
    if (!r.valid()) throw ValidationError("scenario: pedestrian route is degenerate");
    for (const auto& p : r.points) {
      if (!map.in_bounds(p)) {
        throw ValidationError("scenario: pedestrian" + std::to_string(i) + " route leaves the map");
      }
    }
  }
  if (const auto [a, b] = spawn_overlap(s); a >= 0) {
    throw ValidationError("scenario: spawn positions of actors " + std::to_string(a) + " and " +
                          std::to_string(b) + " are closer than 2 m");
  }
  if (!weather_in_range(s.weather)) throw ValidationError("scenario: weather out of range");
}

inline bool scenario_valid(const LaneMap& map, const Scenario& s, const ScenarioBounds& b = {}) {
  try {
    validate_scenario(map, s, b);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

inline WeatherParams sample_weather(Rng& rng) {
  WeatherParams w;
  w.rain_intensity = rng.uniform(0.0, 100.0);
  w.sun_altitude_deg = rng.uniform(-90.0, 90.0);
  w.fog_density = rng.uniform(0.0, 100.0);
  return w;
}

struct ScenarioShape {
  std::size_t npcs = 2;         // three vehicles total
  std::size_t pedestrians = 10;
  double ped_leg_max = 80.0;    // max pedestrian walk distance
};

/// Fully random scenario with spacing-respecting spawn points.
inline Scenario sample_scenario(const LaneMap& map, Rng& rng, const ScenarioShape& shape = {}) {
  for (int attempt = 0; attempt < 48; ++attempt) {
    Scenario s;
    s.ego_route = sample_vehicle_route(map, rng);
    bool ok = true;
    for (std::size_t i = 0; i < shape.npcs && ok; ++i) {
      bool placed = false;
      for (int t = 0; t < 24 && !placed; ++t) {
        Route r = sample_vehicle_route(map, rng);
        s.npc_routes.push_back(r);
        if (spawn_overlap(s).first < 0) {
          placed = true;
        } else {
          s.npc_routes.pop_back();
        }
      }
      ok = placed;
    }
    for (std::size_t i = 0; i < shape.pedestrians && ok; ++i) {
      bool placed = false;
      for (int t = 0; t < 24 && !placed; ++t) {
        const Vec2 a = sample_free_point(map, rng);
        Vec2 b = a + rotate(Vec2{1, 0}, rng.uniform(-kPi, kPi)) *
                         rng.uniform(10.0, shape.ped_leg_max);
        b.x = std::clamp(b.x, map.bounds_min.x - 20.0, map.bounds_max.x + 20.0);
        b.y = std::clamp(b.y, map.bounds_min.y - 20.0, map.bounds_max.y + 20.0);
        s.pedestrian_routes.push_back(make_walk_route(a, b));
        if (spawn_overlap(s).first < 0) {
          placed = true;
        } else {
          s.pedestrian_routes.pop_back();
        }
      }
      ok = placed;
    }
    if (!ok) continue;
    s.weather = sample_weather(rng);
    if (scenario_valid(map, s)) return s;
  }
  throw ValidationError("could not place actors on this map (too small?)");
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json route_to_json(const Route& r) {
  nlohmann::json j;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : r.points) pts.push_back({p.x, p.y});
  auto& sects = j["sections"] = nlohmann::json::array();
  for (const auto& s : r.sections) {
    sects.push_back({{"arc_begin", s.arc_begin},
                     {"arc_end", s.arc_end},
                     {"lane_id", s.lane_id},
                     {"speed_limit", s.speed_limit}});
  }
  auto& stops = j["light_stops"] = nlohmann::json::array();
  for (const auto& ls : r.light_stops) {
    stops.push_back({{"arc", ls.arc}, {"light_id", ls.light_id}});
  }
  return j;
}

inline Route route_from_json(const nlohmann::json& j) {
  Route r;
  for (const auto& jp : j.at("points")) r.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
  for (const auto& js : j.at("sections")) {
    r.sections.push_back({js.at("arc_begin").get<double>(), js.at("arc_end").get<double>(),
                          js.at("lane_id").get<int>(), js.at("speed_limit").get<double>()});
  }
  for (const auto& js : j.at("light_stops")) {
    r.light_stops.push_back({js.at("arc").get<double>(), js.at("light_id").get<int>()});
  }
  return r;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["parent_ids"] = s.parent_ids;
  j["ego_route"] = route_to_json(s.ego_route);
  auto& npcs = j["npc_routes"] = nlohmann::json::array();
  for (const auto& r : s.npc_routes) npcs.push_back(route_to_json(r));
  auto& peds = j["pedestrian_routes"] = nlohmann::json::array();
  for (const auto& r : s.pedestrian_routes) peds.push_back(route_to_json(r));
  j["weather"] = {{"rain_intensity", s.weather.rain_intensity},
                  {"sun_altitude_deg", s.weather.sun_altitude_deg},
                  {"fog_density", s.weather.fog_density}};
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.id = j.at("id").get<std::uint64_t>();
  s.parent_ids = j.at("parent_ids").get<std::vector<std::uint64_t>>();
  s.ego_route = route_from_json(j.at("ego_route"));
  for (const auto& jr : j.at("npc_routes")) s.npc_routes.push_back(route_from_json(jr));
  for (const auto& jr : j.at("pedestrian_routes")) s.pedestrian_routes.push_back(route_from_json(jr));
  const auto& jw = j.at("weather");
  s.weather.rain_intensity = jw.at("rain_intensity").get<double>();
  s.weather.sun_altitude_deg = jw.at("sun_altitude_deg").get<double>();
  s.weather.fog_density = jw.at("fog_density").get<double>();
  return s;
}

}  // namespace scenfuzz
