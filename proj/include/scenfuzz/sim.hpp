#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scenfuzz/agents.hpp"
#include "scenfuzz/feedback.hpp"
#include "scenfuzz/map.hpp"
#include "scenfuzz/rng.hpp"
#include "scenfuzz/scenario.hpp"
#include "scenfuzz/types.hpp"

namespace scenfuzz {

/// Physics and policy constants. The paper delegates these to the simulator;
/// they are gathered here so experiments can vary them in one place.
struct SimParams {
  double wheelbase = kWheelbase;
  double max_accel = kMaxAccel;        // full-throttle acceleration
  double max_brake = kMaxBrake;        // full-brake deceleration (dry)
  double max_steer = kMaxSteerRad;     // wheel angle at |steer| = 1
  double vehicle_speed_cap = 30.0;     // hard per-kind cap, m/s
  double walking_speed = 1.4;          // pedestrians, m/s
  double arrival_radius = 3.0;         // destination reached
  double observation_radius = 60.0;    // base agent visibility
  int observation_waypoints = 10;      // K
  double waypoint_step = 3.0;          // arc spacing of observed waypoints
  double light_visibility = 80.0;      // how far ahead a stop line is reported

  // Weather couplings (documented placeholders; see WeatherEffects).
  double rain_brake_loss = 0.3;   // brake factor = 1 - loss * rain/100
  double fog_visibility_loss = 0.5;
  double night_pedestrian_loss = 0.5;  // applies when sun altitude < 0

  // Built-in NPC follower policy.
  double npc_cone_half_angle = 30.0 * kPi / 180.0;
  double npc_cone_range = 10.0;
  double npc_light_stop_margin = 8.0;
};

struct WeatherEffects {
  double brake_factor = 1.0;
  double vehicle_visibility = 60.0;
  double pedestrian_visibility = 60.0;
};

inline WeatherEffects weather_effects(const WeatherParams& w, const SimParams& p) {
  WeatherEffects e;
  e.brake_factor = 1.0 - p.rain_brake_loss * w.rain_intensity / 100.0;
  e.vehicle_visibility = p.observation_radius * (1.0 - p.fog_visibility_loss * w.fog_density / 100.0);
  e.pedestrian_visibility =
      e.vehicle_visibility * (w.sun_altitude_deg < 0.0 ? 1.0 - p.night_pedestrian_loss : 1.0);
  return e;
}

/// World snapshot at one tick. Actor order is fixed for the whole run:
/// index 0 is the ego, then NPCs, then pedestrians, all in scenario order.
struct SimState {
  std::uint32_t tick_index = 0;
  std::vector<ActorState> actors;
  std::vector<double> route_progress;  // arc along each actor's own route
  std::vector<LightColor> light_phases;
  Rng rng;

  double sim_time() const { return static_cast<double>(tick_index) * kTickSeconds; }
};

inline Obb vehicle_obb(const ActorState& a) {
  return {a.position, a.yaw, kVehicleLength, kVehicleWidth};
}

struct CollisionHit {
  int other = -1;  // actor index the ego touched
  Vec2 where{};
};

/// Ego (actor 0) against every other actor: rectangles for vehicles,
/// discs for pedestrians.
inline std::optional<CollisionHit> ego_collision(const std::vector<ActorState>& actors) {
  if (actors.empty()) return std::nullopt;
  const Obb ego = vehicle_obb(actors[0]);
  for (std::size_t i = 1; i < actors.size(); ++i) {
    const auto& a = actors[i];
    const bool hit = a.kind == ActorKind::pedestrian
                         ? obb_disc_overlap(ego, a.position, kPedestrianRadius)
                         : obb_overlap(ego, vehicle_obb(a));
    if (hit) {
      return CollisionHit{static_cast<int>(i), (actors[0].position + a.position) * 0.5};
    }
  }
  return std::nullopt;
}

/// Copy the 7 per-vehicle signals (ego first, then NPCs in spawn order).
/// Pedestrians are not vehicles and are logged separately.
inline SceneRecord record_scene(const SimState& state) {
  SceneRecord rec;
  rec.tick_index = state.tick_index;
  for (const auto& a : state.actors) {
    if (a.kind == ActorKind::pedestrian) continue;
    rec.values.push_back(a.position.x);
    rec.values.push_back(a.position.y);
    rec.values.push_back(a.velocity.x);
    rec.values.push_back(a.velocity.y);
    rec.values.push_back(a.acceleration.x);
    rec.values.push_back(a.acceleration.y);
    rec.values.push_back(a.yaw);
  }
  return rec;
}

/// Deterministic fixed-timestep world. One instance per run; nothing here
/// is shared mutable state, so distinct runs may execute fully in parallel.
class Simulator {
 public:
  Simulator(const LaneMap& map, const Scenario& scenario, SimParams params = {})
      : map_(map), scenario_(scenario), params_(params),
        effects_(weather_effects(scenario.weather, params)) {
    for (std::size_t i = 0; i < map_.lights.size(); ++i) light_index_[map_.lights[i].id] = i;
    paths_.emplace_back(scenario_.ego_route.points);
    for (const auto& r : scenario_.npc_routes) paths_.emplace_back(r.points);
    for (const auto& r : scenario_.pedestrian_routes) paths_.emplace_back(r.points);
  }

  const LaneMap& map() const { return map_; }
  const Scenario& scenario() const { return scenario_; }
  const SimParams& params() const { return params_; }

  /// Actors at their route starts with zero velocity; rng derived solely
  /// from the seed. Throws on off-road or overlapping spawns.
  SimState spawn(std::uint64_t seed) const {
    check_spawnable();
    SimState st;
    st.rng = Rng(seed);
    const auto place = [&](const Route& r, ActorKind kind) {
      ActorState a;
      a.position = r.start();
      a.yaw = heading_at_arc(r.points, 0.0);
      a.kind = kind;
      st.actors.push_back(a);
      st.route_progress.push_back(0.0);
    };
    place(scenario_.ego_route, ActorKind::ego);
    for (const auto& r : scenario_.npc_routes) place(r, ActorKind::npc);
    for (const auto& r : scenario_.pedestrian_routes) place(r, ActorKind::pedestrian);
    for (const auto& l : map_.lights) st.light_phases.push_back(l.color_at(0.0));
    return st;
  }

  /// Advance exactly one tick (0.05 s). Pure function of (state, control).
  SimState step(const SimState& state, const Control& ego_control) const {
    SimState next = state;
    next.tick_index = state.tick_index + 1;

    // Ego: kinematic bicycle under the agent's control.
    integrate_vehicle(next.actors[0], clamp_control(ego_control));
    next.route_progress[0] =
        advance_progress(paths_[0], next.actors[0].position, state.route_progress[0]);

    // NPCs: built-in follower policy.
    std::size_t npc = 0;
    for (std::size_t i = 1; i < next.actors.size(); ++i) {
      if (next.actors[i].kind != ActorKind::npc) continue;
      const Control c = follower_control(state, i, scenario_.npc_routes[npc++]);
      integrate_vehicle(next.actors[i], c);
      next.route_progress[i] =
          advance_progress(paths_[i], next.actors[i].position, state.route_progress[i]);
    }

    // Pedestrians: constant walking speed along their polyline.
    for (std::size_t i = 1; i < next.actors.size(); ++i) {
      if (next.actors[i].kind != ActorKind::pedestrian) continue;
      const ArcPolyline& path = paths_[i];
      const double s =
          std::min(state.route_progress[i] + params_.walking_speed * kTickSeconds, path.length());
      ActorState& a = next.actors[i];
      const Vec2 arc_point = path.at(s);
      const Vec2 new_vel = (arc_point - a.position) / kTickSeconds;
      a.acceleration = (new_vel - a.velocity) / kTickSeconds;
      a.velocity = new_vel;
      a.position = arc_point;
      if (norm(new_vel) > 1e-6) a.yaw = std::atan2(new_vel.y, new_vel.x);
      next.route_progress[i] = s;
    }

    // Lights follow their schedule; no state is carried.
    for (std::size_t i = 0; i < map_.lights.size(); ++i) {
      next.light_phases[i] = map_.lights[i].color_at(next.sim_time());
    }
    return next;
  }

  /// Assemble what the agent is allowed to see at this tick.
  Observation observe(const SimState& state) const {
    Observation obs;
    obs.ego = state.actors[0];
    for (std::size_t i = 1; i < state.actors.size(); ++i) {
      const auto& a = state.actors[i];
      const double radius = a.kind == ActorKind::pedestrian ? effects_.pedestrian_visibility
                                                            : effects_.vehicle_visibility;
      const double range = dist(a.position, obs.ego.position);
      if (range > radius) continue;
      const Vec2 rel = a.position - obs.ego.position;
      obs.actors.push_back(
          {a, range, wrap_angle(std::atan2(rel.y, rel.x) - obs.ego.yaw), static_cast<int>(i)});
    }
    std::stable_sort(obs.actors.begin(), obs.actors.end(),
                     [](const VisibleActor& x, const VisibleActor& y) { return x.range < y.range; });

    const Route& route = scenario_.ego_route;
    const double progress = state.route_progress[0];
    for (int k = 1; k <= params_.observation_waypoints; ++k) {
      obs.next_waypoints.push_back(paths_[0].at(progress + params_.waypoint_step * k));
    }
    if (const auto stop = route.next_light_stop(progress);
        stop && stop->arc - progress <= params_.light_visibility) {
      const auto it = light_index_.find(stop->light_id);
      if (it != light_index_.end()) {
        obs.light = state.light_phases[it->second];
        obs.light_distance = stop->arc - progress;
      }
    }
    obs.speed_limit = route.speed_limit_at(progress);
    obs.route_remaining = paths_[0].length() - progress;
    return obs;
  }

  /// Execute the scenario to termination: collision, destination arrival,
  /// timeout, or an agent fault (an agent exception is a finding, not a
  /// harness crash).
  Trace run(Agent& agent, std::uint64_t seed, double max_duration_s) const {
    if (max_duration_s <= 0) throw ConfigError("run: max_duration_s must be > 0");
    const auto max_ticks =
        static_cast<std::uint32_t>(std::llround(max_duration_s / kTickSeconds));
    Trace tr;
    tr.scenario = scenario_;
    tr.seed = seed;

    SimState state = spawn(seed);
    std::vector<LightColor> last_colors;
    while (true) {
      tr.scenes.push_back(record_scene(state));
      std::vector<Vec2> peds;
      for (std::size_t i = 0; i < state.actors.size(); ++i) {
        if (state.actors[i].kind == ActorKind::pedestrian) peds.push_back(state.actors[i].position);
      }
      tr.pedestrian_positions.push_back(std::move(peds));
      for (std::size_t i = 0; i < state.light_phases.size(); ++i) {
        if (state.tick_index == 0 || state.light_phases[i] != last_colors[i]) {
          tr.light_events.push_back({state.tick_index, map_.lights[i].id, state.light_phases[i]});
        }
      }
      last_colors = state.light_phases;

      Control control;
      bool faulted = false;
      try {
        control = clamp_control(agent.decide(observe(state)));
      } catch (const std::exception& e) {
        faulted = true;
        tr.fault_message = e.what();
      }
      tr.ego_controls.push_back(control);

      if (faulted) {
        tr.termination = TerminationReason::agent_fault;
        break;
      }
      if (ego_collision(state.actors)) {
        tr.termination = TerminationReason::collision;
        break;
      }
      if (dist(state.actors[0].position, scenario_.ego_route.end()) <= params_.arrival_radius) {
        tr.termination = TerminationReason::arrival;
        break;
      }
      if (state.tick_index >= max_ticks) {
        tr.termination = TerminationReason::timeout;
        break;
      }
      state = step(state, control);
    }
    return tr;
  }

 private:
  void check_spawnable() const {
    const auto on_lane = [&](Vec2 p) {
      const auto near = map_.nearest_lane(p, 30.0);
      return near.lane_index >= 0 &&
             near.distance <= map_.lanes[static_cast<std::size_t>(near.lane_index)].width * 0.5 + 0.5;
    };
    if (!on_lane(scenario_.ego_route.start())) throw ValidationError("spawn: ego starts off-road");
    for (std::size_t i = 0; i < scenario_.npc_routes.size(); ++i) {
      if (!on_lane(scenario_.npc_routes[i].start())) {
        throw ValidationError("spawn: npc" + std::to_string(i) + " starts off-road");
      }
    }
    if (const auto [a, b] = spawn_overlap(scenario_); a >= 0) {
      throw ValidationError("spawn: actors " + std::to_string(a) + " and " + std::to_string(b) +
                            " overlap (closer than 2 m)");
    }
  }

  static Control clamp_control(const Control& c) {
    return {std::clamp(c.throttle, 0.0, 1.0), std::clamp(c.brake, 0.0, 1.0),
            std::clamp(c.steer, -1.0, 1.0)};
  }

  /// Forward-Euler kinematic bicycle. Brake wins over throttle; rain scales
  /// brake effectiveness.
  void integrate_vehicle(ActorState& a, const Control& c) const {
    const double v = a.speed();
    const double accel = c.brake > 0.0 ? -params_.max_brake * c.brake * effects_.brake_factor
                                       : params_.max_accel * c.throttle;
    const double steer_angle = c.steer * params_.max_steer;

    a.position += rotate({v, 0}, a.yaw) * kTickSeconds;
    const double yaw_rate = v / params_.wheelbase * std::tan(steer_angle);
    const double new_yaw = wrap_angle(a.yaw + yaw_rate * kTickSeconds);
    const double new_speed =
        std::clamp(v + accel * kTickSeconds, 0.0, params_.vehicle_speed_cap);
    const Vec2 new_vel = rotate({new_speed, 0}, new_yaw);
    a.acceleration = (new_vel - a.velocity) / kTickSeconds;
    a.velocity = new_vel;
    a.yaw = new_yaw;
  }

  /// Monotone projection of a position onto its route (arc length).
  static double advance_progress(const ArcPolyline& path, Vec2 pos, double prev) {
    const double len = path.length();
    double best_arc = prev;
    double best_d = dist(pos, path.at(prev));
    for (double ds = 0.25; ds <= 3.0; ds += 0.25) {
      const double arc = std::min(prev + ds, len);
      const double d = dist(pos, path.at(arc));
      if (d < best_d) {
        best_d = d;
        best_arc = arc;
      }
    }
    return best_arc;
  }

  /// Pure-pursuit follower at the lane speed limit, braking for actors in a
  /// forward cone and for red lights governing the NPC's lane.
  Control follower_control(const SimState& state, std::size_t self, const Route& route) const {
    const ActorState& me = state.actors[self];
    const double progress = state.route_progress[self];
    const double len = paths_[self].length();
    Control c;

    if (progress >= len - 0.5) {
      c.brake = 1.0;  // route finished; hold position
      return c;
    }

    const double v = me.speed();
    const double lookahead = std::clamp(0.8 * v, 3.0, 12.0);
    const Vec2 target = paths_[self].at(progress + lookahead);
    const Vec2 rel = target - me.position;
    const double alpha = wrap_angle(std::atan2(rel.y, rel.x) - me.yaw);
    const double delta = std::atan(2.0 * params_.wheelbase * std::sin(alpha) /
                                   std::max(dist(target, me.position), 1.0));
    c.steer = std::clamp(delta / params_.max_steer, -1.0, 1.0);

    // Obstacle in the forward cone?
    bool obstacle = false;
    for (std::size_t i = 0; i < state.actors.size() && !obstacle; ++i) {
      if (i == self) continue;
      const auto& other = state.actors[i];
      const double range = dist(other.position, me.position);
      if (range > params_.npc_cone_range) continue;
      const Vec2 d = other.position - me.position;
      if (std::abs(wrap_angle(std::atan2(d.y, d.x) - me.yaw)) <= params_.npc_cone_half_angle) {
        obstacle = true;
      }
    }

    // Red light governing this lane?
    bool light_stop = false;
    if (const auto stop = route.next_light_stop(progress)) {
      const double gap = stop->arc - progress;
      const double need = v * v / (2.0 * params_.max_brake * effects_.brake_factor) + 2.0;
      if (gap <= std::max(need, params_.npc_light_stop_margin)) {
        const auto it = light_index_.find(stop->light_id);
        if (it != light_index_.end() && state.light_phases[it->second] == LightColor::red) {
          light_stop = true;
        }
      }
    }

    if (obstacle || light_stop) {
      c.brake = 1.0;
      c.throttle = 0.0;
      return c;
    }

    const double limit = route.speed_limit_at(progress);
    if (v < limit) {
      c.throttle = std::clamp(0.5 * (limit - v), 0.0, 1.0);
    } else if (v > limit * 1.02) {
      c.brake = 0.3;
    }
    return c;
  }

  const LaneMap& map_;
  Scenario scenario_;
  SimParams params_;
  WeatherEffects effects_;
  std::unordered_map<int, std::size_t> light_index_;
  std::vector<ArcPolyline> paths_;  // per actor, in actor order
};

/// Convenience wrapper matching the one-shot run contract.
inline Trace run_scenario(const LaneMap& map, const Scenario& scenario, Agent& agent,
                          std::uint64_t seed, double max_duration_s, SimParams params = {}) {
  return Simulator(map, scenario, params).run(agent, seed, max_duration_s);
}

}  // namespace scenfuzz
