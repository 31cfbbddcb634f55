#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenfuzz/geometry.hpp"
#include "scenfuzz/rng.hpp"
#include "scenfuzz/types.hpp"

namespace scenfuzz {

inline constexpr int kMapSchemaVersion = 1;

enum class LightColor : std::uint8_t { green = 0, yellow = 1, red = 2 };

inline const char* to_string(LightColor c) {
  switch (c) {
    case LightColor::green: return "green";
    case LightColor::yellow: return "yellow";
    default: return "red";
  }
}

inline LightColor light_color_from_string(const std::string& s) {
  if (s == "green") return LightColor::green;
  if (s == "yellow") return LightColor::yellow;
  if (s == "red") return LightColor::red;
  throw ParseError("unknown light color '" + s + "'");
}

struct LightPhase {
  LightColor color = LightColor::green;
  double duration = 0.0;  // seconds
};

struct TrafficLight {
  int id = 0;
  Vec2 position{};
  std::vector<LightPhase> schedule;  // ordered cycle; total duration > 0

  double cycle_duration() const {
    double t = 0;
    for (const auto& p : schedule) t += p.duration;
    return t;
  }

  /// Color at absolute sim time t (schedule repeats from t = 0).
  LightColor color_at(double t) const {
    const double cycle = cycle_duration();
    double phase = std::fmod(t, cycle);
    if (phase < 0) phase += cycle;
    for (const auto& p : schedule) {
      if (phase < p.duration) return p.color;
      phase -= p.duration;
    }
    return schedule.back().color;
  }
};

struct Lane {
  int id = 0;
  Polyline centerline;       // >= 2 points, meters
  double width = 3.5;        // > 0
  double speed_limit = 0.0;  // m/s
  bool left_crossable = true;
  bool right_crossable = true;
  std::optional<int> light_id;  // light governing this lane's exit, if any
  std::vector<int> successors;  // lane ids reachable from the end of this lane

  double length() const { return polyline_length(centerline); }
};

struct Intersection {
  Polyline polygon;
  std::vector<int> light_ids;
};

struct LaneBoundary {
  Polyline line;
  bool crossable = true;
  int lane_id = 0;
};

/// Static road network. Immutable after load; safe to share across runs.
struct LaneMap {
  int schema_version = kMapSchemaVersion;
  std::string name;
  double waypoint_spacing = 5.0;
  std::vector<Lane> lanes;
  std::vector<TrafficLight> lights;
  std::vector<Intersection> intersections;

  // Derived on load.
  std::vector<Vec2> waypoints;           // sampled along all centerlines
  std::vector<LaneBoundary> boundaries;  // left/right edge per lane
  Vec2 bounds_min{}, bounds_max{};       // bounding box over centerlines
  std::uint64_t hash = 0;                // content hash for recordings

  SegmentGrid lane_grid{25.0};      // centerline segments -> lane index
  SegmentGrid boundary_grid{25.0};  // non-crossable boundary segments -> boundary index
  SegmentGrid waypoint_grid{25.0};  // degenerate segments -> waypoint index

  const Lane* lane_by_id(int id) const {
    for (const auto& l : lanes)
      if (l.id == id) return &l;
    return nullptr;
  }

  const TrafficLight* light_by_id(int id) const {
    for (const auto& l : lights)
      if (l.id == id) return &l;
    return nullptr;
  }

  struct NearestLane {
    int lane_index = -1;
    double distance = std::numeric_limits<double>::infinity();
    double arc = 0;  // along that lane's centerline
  };

  /// Closest lane centerline to p within `radius`; lane_index -1 if none.
  NearestLane nearest_lane(Vec2 p, double radius = 30.0) const {
    NearestLane best;
    lane_grid.for_candidates(p, radius, [&](const SegmentGrid::Hit& h) {
      const double d = point_segment_distance(p, h.a, h.b);
      if (d < best.distance) {
        best.distance = d;
        best.lane_index = static_cast<int>(h.payload);
      }
    });
    if (best.lane_index >= 0) {
      best.arc = project_to_polyline(lanes[static_cast<std::size_t>(best.lane_index)].centerline, p).arc;
    }
    return best;
  }

  bool on_some_lane(Vec2 p, double margin = 0.0) const {
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      const auto proj = project_to_polyline(lanes[i].centerline, p);
      if (proj.distance <= lanes[i].width * 0.5 + margin) return true;
    }
    return false;
  }

  bool in_bounds(Vec2 p, double margin = 25.0) const {
    return p.x >= bounds_min.x - margin && p.x <= bounds_max.x + margin &&
           p.y >= bounds_min.y - margin && p.y <= bounds_max.y + margin;
  }

  /// Intersection polygon containing p, or -1.
  int intersection_at(Vec2 p) const {
    for (std::size_t i = 0; i < intersections.size(); ++i) {
      if (polygon_contains(intersections[i].polygon, p)) return static_cast<int>(i);
    }
    return -1;
  }
};

namespace detail {

inline Vec2 vec2_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("field '" + field + "' must be a [x, y] number pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T require(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field)) throw ParseError("missing required field '" + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field '" + field + "' has wrong type");
  }
}

/// Offset a centerline laterally (positive = left of travel direction).
inline Polyline offset_polyline(const Polyline& line, double offset) {
  Polyline out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    Vec2 d;
    if (i == 0) {
      d = line[1] - line[0];
    } else if (i + 1 == line.size()) {
      d = line[i] - line[i - 1];
    } else {
      d = unit(line[i] - line[i - 1]) + unit(line[i + 1] - line[i]);
    }
    out.push_back(line[i] + unit(perp(d)) * offset);
  }
  return out;
}

}  // namespace detail

/// Canonical serialization (used for hashing and for save).
inline nlohmann::json map_to_json(const LaneMap& m) {
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["name"] = m.name;
  j["waypoint_spacing"] = m.waypoint_spacing;
  auto& lanes = j["lanes"] = nlohmann::json::array();
  for (const auto& l : m.lanes) {
    nlohmann::json jl;
    jl["id"] = l.id;
    auto& c = jl["centerline"] = nlohmann::json::array();
    for (const auto& p : l.centerline) c.push_back({p.x, p.y});
    jl["width"] = l.width;
    jl["speed_limit"] = l.speed_limit;
    jl["left_crossable"] = l.left_crossable;
    jl["right_crossable"] = l.right_crossable;
    if (l.light_id) jl["light_id"] = *l.light_id;
    if (!l.successors.empty()) jl["successors"] = l.successors;
    lanes.push_back(std::move(jl));
  }
  auto& lights = j["lights"] = nlohmann::json::array();
  for (const auto& l : m.lights) {
    nlohmann::json jl;
    jl["id"] = l.id;
    jl["position"] = {l.position.x, l.position.y};
    auto& sched = jl["schedule"] = nlohmann::json::array();
    for (const auto& p : l.schedule) {
      sched.push_back({{"color", to_string(p.color)}, {"duration", p.duration}});
    }
    lights.push_back(std::move(jl));
  }
  auto& inters = j["intersections"] = nlohmann::json::array();
  for (const auto& x : m.intersections) {
    nlohmann::json ji;
    auto& poly = ji["polygon"] = nlohmann::json::array();
    for (const auto& p : x.polygon) poly.push_back({p.x, p.y});
    ji["light_ids"] = x.light_ids;
    inters.push_back(std::move(ji));
  }
  return j;
}

/// Parse and validate a map document; samples waypoints and builds the
/// spatial indices. Throws ParseError / ValidationError naming the field.
inline LaneMap load_map_from_json(const nlohmann::json& j) {
  LaneMap m;
  m.schema_version = detail::require<int>(j, "schema_version");
  if (m.schema_version != kMapSchemaVersion) {
    throw ValidationError("unsupported map schema_version " + std::to_string(m.schema_version));
  }
  m.name = j.value("name", std::string{});
  m.waypoint_spacing = j.value("waypoint_spacing", 5.0);
  if (m.waypoint_spacing <= 0) throw ValidationError("waypoint_spacing must be > 0");

  if (!j.contains("lanes")) throw ParseError("missing required field 'lanes'");
  for (const auto& jl : j.at("lanes")) {
    Lane l;
    l.id = detail::require<int>(jl, "id");
    if (!jl.contains("centerline")) throw ParseError("missing required field 'centerline'");
    for (const auto& jp : jl.at("centerline")) {
      l.centerline.push_back(detail::vec2_from_json(jp, "centerline"));
    }
    if (l.centerline.size() < 2) {
      throw ValidationError("lane " + std::to_string(l.id) + ": centerline needs >= 2 points");
    }
    if (polyline_length(l.centerline) <= 0) {
      throw ValidationError("lane " + std::to_string(l.id) + ": zero-length centerline");
    }
    l.width = detail::require<double>(jl, "width");
    if (l.width <= 0) throw ValidationError("lane " + std::to_string(l.id) + ": width must be > 0");
    l.speed_limit = detail::require<double>(jl, "speed_limit");
    if (l.speed_limit <= 0) {
      throw ValidationError("lane " + std::to_string(l.id) + ": speed_limit must be > 0");
    }
    l.left_crossable = detail::require<bool>(jl, "left_crossable");
    l.right_crossable = detail::require<bool>(jl, "right_crossable");
    if (jl.contains("light_id")) l.light_id = jl.at("light_id").get<int>();
    if (jl.contains("successors")) l.successors = jl.at("successors").get<std::vector<int>>();
    m.lanes.push_back(std::move(l));
  }
  if (m.lanes.empty()) throw ValidationError("map has no lanes");

  if (j.contains("lights")) {
    for (const auto& jl : j.at("lights")) {
      TrafficLight t;
      t.id = detail::require<int>(jl, "id");
      t.position = detail::vec2_from_json(jl.at("position"), "position");
      if (!jl.contains("schedule")) throw ParseError("missing required field 'schedule'");
      for (const auto& jp : jl.at("schedule")) {
        LightPhase ph;
        ph.color = light_color_from_string(detail::require<std::string>(jp, "color"));
        ph.duration = detail::require<double>(jp, "duration");
        if (ph.duration < 0) throw ValidationError("light phase duration must be >= 0");
        t.schedule.push_back(ph);
      }
      if (t.cycle_duration() <= 0) {
        throw ValidationError("light " + std::to_string(t.id) + ": cycle duration must be > 0");
      }
      m.lights.push_back(std::move(t));
    }
  }

  if (j.contains("intersections")) {
    for (const auto& ji : j.at("intersections")) {
      Intersection x;
      if (!ji.contains("polygon")) throw ParseError("missing required field 'polygon'");
      for (const auto& jp : ji.at("polygon")) x.polygon.push_back(detail::vec2_from_json(jp, "polygon"));
      if (x.polygon.size() < 3) throw ValidationError("intersection polygon needs >= 3 points");
      if (ji.contains("light_ids")) x.light_ids = ji.at("light_ids").get<std::vector<int>>();
      for (int id : x.light_ids) {
        bool found = false;
        for (const auto& t : m.lights) found = found || t.id == id;
        if (!found) throw ValidationError("intersection references unknown light " + std::to_string(id));
      }
      m.intersections.push_back(std::move(x));
    }
  }

  // Referential checks.
  for (const auto& l : m.lanes) {
    if (l.light_id && m.light_by_id(*l.light_id) == nullptr) {
      throw ValidationError("lane " + std::to_string(l.id) + " references unknown light " +
                            std::to_string(*l.light_id));
    }
    for (int s : l.successors) {
      if (m.lane_by_id(s) == nullptr) {
        throw ValidationError("lane " + std::to_string(l.id) + " references unknown successor " +
                              std::to_string(s));
      }
    }
  }

  // Derived data: waypoints, boundaries, bounds, indices, content hash.
  m.bounds_min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  m.bounds_max = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t li = 0; li < m.lanes.size(); ++li) {
    const auto& l = m.lanes[li];
    for (const Vec2 p : resample_polyline(l.centerline, m.waypoint_spacing)) m.waypoints.push_back(p);
    for (const auto& p : l.centerline) {
      m.bounds_min.x = std::min(m.bounds_min.x, p.x);
      m.bounds_min.y = std::min(m.bounds_min.y, p.y);
      m.bounds_max.x = std::max(m.bounds_max.x, p.x);
      m.bounds_max.y = std::max(m.bounds_max.y, p.y);
    }
    for (std::size_t i = 1; i < l.centerline.size(); ++i) {
      m.lane_grid.insert(l.centerline[i - 1], l.centerline[i], static_cast<std::uint32_t>(li));
    }
    m.boundaries.push_back({detail::offset_polyline(l.centerline, l.width * 0.5), l.left_crossable, l.id});
    m.boundaries.push_back({detail::offset_polyline(l.centerline, -l.width * 0.5), l.right_crossable, l.id});
  }
  for (std::size_t bi = 0; bi < m.boundaries.size(); ++bi) {
    if (m.boundaries[bi].crossable) continue;
    const auto& line = m.boundaries[bi].line;
    for (std::size_t i = 1; i < line.size(); ++i) {
      m.boundary_grid.insert(line[i - 1], line[i], static_cast<std::uint32_t>(bi));
    }
  }
  for (std::size_t wi = 0; wi < m.waypoints.size(); ++wi) {
    m.waypoint_grid.insert(m.waypoints[wi], m.waypoints[wi], static_cast<std::uint32_t>(wi));
  }
  m.hash = fnv1a(map_to_json(m).dump());
  return m;
}

inline LaneMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open map file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("map file '" + path + "': " + e.what());
  }
  LaneMap m = load_map_from_json(j);
  if (m.name.empty()) m.name = path;
  return m;
}

}  // namespace scenfuzz
