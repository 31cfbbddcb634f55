#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "scenfuzz/geometry.hpp"
#include "scenfuzz/map.hpp"
#include "scenfuzz/rng.hpp"

namespace scenfuzz {

/// Consecutive stretch of a route that lies on one lane (or bridges two
/// lanes through an intersection, in which case lane_id is the lane being
/// entered).
struct RouteSection {
  double arc_begin = 0;
  double arc_end = 0;
  int lane_id = -1;  // -1 for free (pedestrian) routes
  double speed_limit = 0;
};

/// Arc position at which a light-governed lane ends (the stop line).
struct LightStop {
  double arc = 0;
  int light_id = 0;
};

struct Route {
  Polyline points;
  std::vector<RouteSection> sections;
  std::vector<LightStop> light_stops;

  Vec2 start() const { return points.front(); }
  Vec2 end() const { return points.back(); }
  double length() const { return polyline_length(points); }
  bool valid() const { return points.size() >= 2; }

  const RouteSection* section_at(double arc) const {
    for (const auto& s : sections) {
      if (arc >= s.arc_begin && arc <= s.arc_end) return &s;
    }
    return sections.empty() ? nullptr : &sections.back();
  }

  double speed_limit_at(double arc) const {
    const auto* s = section_at(arc);
    return s ? s->speed_limit : 0.0;
  }

  int lane_at(double arc) const {
    const auto* s = section_at(arc);
    return s ? s->lane_id : -1;
  }

  /// Next light stop at or after arc, if any.
  std::optional<LightStop> next_light_stop(double arc) const {
    for (const auto& ls : light_stops) {
      if (ls.arc >= arc - 1e-9) return ls;
    }
    return std::nullopt;
  }
};

/// Straight two-point pedestrian route.
inline Route make_walk_route(Vec2 from, Vec2 to) {
  Route r;
  r.points = {from, to};
  r.sections.push_back({0.0, dist(from, to), -1, 0.0});
  return r;
}

/// Assemble a vehicle route from a lane-id walk. The route follows each
/// lane's centerline from `start_arc` on the first lane to `end_arc` on the
/// last, bridging gaps between consecutive lanes with straight connectors.
inline Route build_lane_route(const LaneMap& map, const std::vector<int>& lane_path,
                              double start_arc, double end_arc) {
  Route r;
  double acc = 0;
  for (std::size_t k = 0; k < lane_path.size(); ++k) {
    const Lane* lane = map.lane_by_id(lane_path[k]);
    if (lane == nullptr) throw ValidationError("route references unknown lane");
    const double len = lane->length();
    const double a0 = (k == 0) ? std::clamp(start_arc, 0.0, len) : 0.0;
    const double a1 = (k + 1 == lane_path.size()) ? std::clamp(end_arc, 0.0, len) : len;
    if (a1 - a0 < 0.05) continue;
    Polyline slice = polyline_slice(lane->centerline, a0, a1);
    if (!r.points.empty()) {
      const double gap = dist(r.points.back(), slice.front());
      if (gap > 0.25) {
        // Bridge across the intersection; attribute it to the lane entered.
        r.sections.push_back({acc, acc + gap, lane->id, lane->speed_limit});
        acc += gap;
        r.points.push_back(slice.front());
      } else if (gap > 1e-9) {
        acc += gap;
        r.points.push_back(slice.front());
      }
    }
    const double sect_begin = acc;
    for (std::size_t i = r.points.empty() ? 0 : 1; i < slice.size(); ++i) {
      if (!r.points.empty()) acc += dist(r.points.back(), slice[i]);
      r.points.push_back(slice[i]);
    }
    r.sections.push_back({sect_begin, acc, lane->id, lane->speed_limit});
    if (lane->light_id && a1 >= len - 0.5) {
      r.light_stops.push_back({acc, *lane->light_id});
    }
  }
  if (r.points.size() < 2) throw ValidationError("degenerate route (length too short)");
  return r;
}

struct RouteSampleOptions {
  double min_length = 60.0;
  double max_length = 280.0;
  double start_margin = 8.0;  // keep starts away from the very end of a lane
};

/// Random on-map vehicle route: uniform start lane and arc, then a walk
/// over lane successors until the target length is reached.
inline Route sample_vehicle_route(const LaneMap& map, Rng& rng,
                                  const RouteSampleOptions& opts = {}) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::size_t li = static_cast<std::size_t>(rng.uniform_int(map.lanes.size()));
    const Lane& first = map.lanes[li];
    const double len = first.length();
    if (len < opts.start_margin * 2) continue;
    const double s0 = rng.uniform(0.0, len - opts.start_margin);
    const double target = rng.uniform(opts.min_length, opts.max_length);

    std::vector<int> path{first.id};
    double have = len - s0;
    const Lane* cur = &first;
    while (have < target) {
      if (cur->successors.empty()) break;
      const int nxt = cur->successors[rng.uniform_int(cur->successors.size())];
      if (std::count(path.begin(), path.end(), nxt) > 1) break;  // avoid tight loops
      path.push_back(nxt);
      cur = map.lane_by_id(nxt);
      have += cur->length();
    }
    const double last_len = map.lane_by_id(path.back())->length();
    double end_arc = last_len - std::max(0.0, have - target);
    end_arc = std::clamp(end_arc, 1.0, last_len);
    Route r = build_lane_route(map, path, s0, end_arc);
    if (r.length() >= opts.min_length * 0.5) return r;
  }
  throw ValidationError("could not sample a route on this map (too small?)");
}

/// Random point within the map bounds (margin included).
inline Vec2 sample_free_point(const LaneMap& map, Rng& rng, double margin = 20.0) {
  return {rng.uniform(map.bounds_min.x - margin, map.bounds_max.x + margin),
          rng.uniform(map.bounds_min.y - margin, map.bounds_max.y + margin)};
}

/// Move a point off the carriageway: if it lies within a lane, push it just
/// past that lane's edge (roadside), preserving the side it was on.
inline Vec2 push_off_lanes(const LaneMap& map, Vec2 p, double clearance = 1.0) {
  for (int pass = 0; pass < 4; ++pass) {
    const auto near = map.nearest_lane(p, 40.0);
    if (near.lane_index < 0) return p;
    const Lane& lane = map.lanes[static_cast<std::size_t>(near.lane_index)];
    if (near.distance > lane.width * 0.5 + clearance * 0.5) return p;
    const auto proj = project_to_polyline(lane.centerline, p);
    Vec2 away = p - proj.point;
    if (norm(away) < 1e-6) away = perp(unit(lane.centerline.back() - lane.centerline.front()));
    p = proj.point + unit(away) * (lane.width * 0.5 + clearance);
  }
  return p;
}

}  // namespace scenfuzz
