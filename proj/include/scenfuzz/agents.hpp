#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenfuzz/map.hpp"
#include "scenfuzz/types.hpp"

#include <csignal>
#include <cstdlib>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace scenfuzz {

// Nominal vehicle constants shared by the simulator defaults and the
// reference agents' stopping-distance estimates.
inline constexpr double kWheelbase = 2.8;
inline constexpr double kMaxAccel = 4.0;       // m/s^2
inline constexpr double kMaxBrake = 8.0;       // m/s^2
inline constexpr double kMaxSteerRad = 35.0 * kPi / 180.0;

struct VisibleActor {
  ActorState state;
  double range = 0;    // meters from ego
  double bearing = 0;  // radians relative to ego heading, (-pi, pi]
  int actor_index = 0;
};

/// What the agent under test gets to see each tick.
struct Observation {
  ActorState ego;
  std::vector<VisibleActor> actors;  // sorted by range ascending
  std::vector<Vec2> next_waypoints;  // K upcoming route points
  std::optional<LightColor> light;   // governing light, if one is ahead
  double light_distance = 0;         // meters along route to its stop line
  double speed_limit = 0;            // m/s at the current route position
  double route_remaining = 0;        // meters along route to the destination
};

/// Agent under test. One instance per run; may hold internal state but must
/// be a deterministic function of the observation stream (no entropy).
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Control decide(const Observation& obs) = 0;
};

using AgentPtr = std::unique_ptr<Agent>;

// ---------------------------------------------------------------------------
// Reference agents

namespace detail {

/// Rule-based driver all bundled profiles derive from. Steers by pure
/// pursuit over the route waypoints, brakes for governed lights, and brakes
/// for actors whose predicted positions enter the ego's forward corridor.
struct DriverParams {
  double bearing_limit = kPi;     // actors beyond this bearing are invisible to hazard logic
  int brake_delay_ticks = 0;      // reaction latency, in ticks
  bool stop_on_yellow = true;
  bool latch_light_stop = false;  // once stopped for a light, never move again
  bool veer = false;              // periodic unchecked lane departure
  double corridor_half_width = 1.9;
  double prediction_horizon = 2.5;   // s
  double prudence_range = 12.0;      // pedestrian caution bubble
  double assumed_brake = 5.0;        // m/s^2 used for stopping-distance estimates
  double cruise_gain = 0.5;          // throttle P gain
};

class RuleDriver final : public Agent {
 public:
  explicit RuleDriver(DriverParams p) : p_(p) {}

  Control decide(const Observation& obs) override {
    Control out;
    const double v = obs.ego.speed();

    // Pure pursuit toward the first waypoint beyond the lookahead distance.
    const double lookahead = std::clamp(0.8 * v, 4.0, 14.0);
    Vec2 target = obs.next_waypoints.empty() ? obs.ego.position + rotate({10, 0}, obs.ego.yaw)
                                             : obs.next_waypoints.back();
    for (const auto& wp : obs.next_waypoints) {
      if (dist(wp, obs.ego.position) >= lookahead) {
        target = wp;
        break;
      }
    }
    const Vec2 rel = target - obs.ego.position;
    const double alpha = wrap_angle(std::atan2(rel.y, rel.x) - obs.ego.yaw);
    const double ld = std::max(dist(target, obs.ego.position), 1.0);
    const double delta = std::atan(2.0 * kWheelbase * std::sin(alpha) / ld);
    out.steer = std::clamp(delta / kMaxSteerRad, -1.0, 1.0);

    double brake = 0.0;

    // Traffic light ahead.
    if (obs.light && obs.light_distance > -1.0) {
      const bool must_stop = *obs.light == LightColor::red ||
                             (p_.stop_on_yellow && *obs.light == LightColor::yellow);
      if (must_stop && obs.light_distance < std::max(15.0, stop_distance(v))) {
        brake = 1.0;
        if (p_.latch_light_stop && v < 0.3) latched_ = true;
      }
    }
    if (latched_) brake = 1.0;

    // Hazards: any actor whose predicted position enters the forward
    // corridor within the horizon, plus a caution bubble around
    // approaching pedestrians.
    const bool veering = update_veer();
    const Vec2 fwd = rotate({1, 0}, obs.ego.yaw);
    double nearest_hazard = std::numeric_limits<double>::infinity();
    for (const auto& a : obs.actors) {
      if (std::abs(a.bearing) > p_.bearing_limit) continue;     // the blind spot
      if (veering && std::abs(a.bearing) > 25.0 * kPi / 180.0) continue;  // no yield check
      for (double tau = 0.0; tau <= p_.prediction_horizon; tau += 0.25) {
        const Vec2 future = a.state.position + a.state.velocity * tau - obs.ego.position;
        const double ahead = dot(future, fwd);
        const double lateral = cross(fwd, future);
        if (std::abs(lateral) < p_.corridor_half_width && ahead > 0 &&
            ahead < stop_distance(v) + 1.0) {
          nearest_hazard = std::min(nearest_hazard, ahead);
        }
      }
      if (a.state.kind == ActorKind::pedestrian && a.range < p_.prudence_range) {
        const Vec2 toward_ego = obs.ego.position - a.state.position;
        if (dot(a.state.velocity, toward_ego) > 0.05 && v > 0.5) {
          brake = std::max(brake, 0.8);
        }
      }
    }
    if (nearest_hazard < stop_distance(v)) brake = 1.0;

    // Cruise control toward the posted limit.
    if (brake == 0.0) {
      const double target_speed = obs.speed_limit > 0 ? obs.speed_limit : 8.0;
      if (v < target_speed) {
        out.throttle = std::clamp(p_.cruise_gain * (target_speed - v), 0.0, 1.0);
      } else if (v > target_speed * 1.02) {
        brake = 0.3;
      }
    }

    out.brake = brake;
    if (veering) out.steer = std::clamp(out.steer + veer_sign_ * 0.35, -1.0, 1.0);

    // Delayed reaction: the brake channel lags by brake_delay_ticks.
    if (p_.brake_delay_ticks > 0) {
      brake_history_.push_back(out.brake);
      const int t = static_cast<int>(brake_history_.size()) - 1;
      const int src = t - p_.brake_delay_ticks;
      out.brake = src >= 0 ? brake_history_[static_cast<std::size_t>(src)] : 0.0;
    }
    if (out.brake > 0) out.throttle = 0.0;
    ++tick_;
    return out;
  }

 private:
  double stop_distance(double v) const {
    return v * v / (2.0 * p_.assumed_brake) + 0.3 * v + 2.5;
  }

  bool update_veer() {
    if (!p_.veer) return false;
    // 1.5 s swerve every 8 s, alternating direction, starting at t = 6 s.
    const int period = 160, length = 30, offset = 120;
    const int phase = (tick_ - offset) % period;
    const bool active = tick_ >= offset && phase >= 0 && phase < length;
    if (active && phase == 0) veer_sign_ = -veer_sign_;
    return active;
  }

  DriverParams p_;
  std::deque<double> brake_history_;
  bool latched_ = false;
  int tick_ = 0;
  double veer_sign_ = 1.0;
};

}  // namespace detail

/// Bundled profiles: one clean driver and four seeded defects.
inline AgentPtr make_reference_agent(const std::string& profile,
                                     const nlohmann::json& params = nlohmann::json::object()) {
  detail::DriverParams p;
  if (params.contains("prediction_horizon")) p.prediction_horizon = params.at("prediction_horizon");
  if (params.contains("prudence_range")) p.prudence_range = params.at("prudence_range");
  if (profile == "cautious") {
    return std::make_unique<detail::RuleDriver>(p);
  }
  if (profile == "blindspot") {
    p.bearing_limit = 60.0 * kPi / 180.0;  // ignores actors beyond +-60 degrees
    return std::make_unique<detail::RuleDriver>(p);
  }
  if (profile == "late_brake") {
    p.brake_delay_ticks = params.value("delay_ticks", 10);  // 0.5 s at 20 Hz
    return std::make_unique<detail::RuleDriver>(p);
  }
  if (profile == "greedy_lanechange") {
    p.veer = true;
    return std::make_unique<detail::RuleDriver>(p);
  }
  if (profile == "light_misjudge") {
    p.stop_on_yellow = true;
    p.latch_light_stop = true;
    return std::make_unique<detail::RuleDriver>(p);
  }
  throw ConfigError("unknown agent profile '" + profile + "'");
}

// ---------------------------------------------------------------------------
// Observation / Control wire format (used by the process-boundary adapter
// and by trace serialization)

inline nlohmann::json control_to_json(const Control& c) {
  return {{"throttle", c.throttle}, {"brake", c.brake}, {"steer", c.steer}};
}

inline Control control_from_json(const nlohmann::json& j) {
  Control c;
  c.throttle = j.at("throttle").get<double>();
  c.brake = j.at("brake").get<double>();
  c.steer = j.at("steer").get<double>();
  return c;
}

inline nlohmann::json actor_state_to_json(const ActorState& s) {
  return {{"position", {s.position.x, s.position.y}},
          {"velocity", {s.velocity.x, s.velocity.y}},
          {"acceleration", {s.acceleration.x, s.acceleration.y}},
          {"yaw", s.yaw},
          {"kind", to_string(s.kind)}};
}

inline nlohmann::json observation_to_json(const Observation& o) {
  nlohmann::json j;
  j["ego"] = actor_state_to_json(o.ego);
  auto& actors = j["actors"] = nlohmann::json::array();
  for (const auto& a : o.actors) {
    actors.push_back({{"state", actor_state_to_json(a.state)},
                      {"range", a.range},
                      {"bearing", a.bearing},
                      {"actor_index", a.actor_index}});
  }
  auto& wps = j["next_waypoints"] = nlohmann::json::array();
  for (const auto& p : o.next_waypoints) wps.push_back({p.x, p.y});
  j["light"] = o.light ? nlohmann::json(to_string(*o.light)) : nlohmann::json(nullptr);
  j["light_distance"] = o.light_distance;
  j["speed_limit"] = o.speed_limit;
  j["route_remaining"] = o.route_remaining;
  return j;
}

/// Third-party agent behind a process boundary: observations go out on the
/// child's stdin as JSON lines, controls come back on its stdout.
class ProcessAgent final : public Agent {
 public:
  explicit ProcessAgent(const std::string& command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw ConfigError("process agent: pipe() failed");
    }
    pid_ = fork();
    if (pid_ < 0) throw ConfigError("process agent: fork() failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    out_ = fdopen(to_child[1], "w");
    in_ = fdopen(from_child[0], "r");
    if (out_ == nullptr || in_ == nullptr) throw ConfigError("process agent: fdopen() failed");
  }

  ~ProcessAgent() override {
    if (out_ != nullptr) fclose(out_);
    if (in_ != nullptr) fclose(in_);
    if (pid_ > 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, nullptr, 0);
    }
  }

  Control decide(const Observation& obs) override {
    const std::string line = observation_to_json(obs).dump() + "\n";
    if (fputs(line.c_str(), out_) == EOF || fflush(out_) != 0) {
      throw std::runtime_error("process agent: child closed stdin");
    }
    char* buf = nullptr;
    std::size_t cap = 0;
    const ssize_t n = getline(&buf, &cap, in_);
    std::string reply = n > 0 ? std::string(buf, static_cast<std::size_t>(n)) : std::string{};
    free(buf);
    if (n <= 0) throw std::runtime_error("process agent: child closed stdout");
    const Control c = control_from_json(nlohmann::json::parse(reply));
    if (!control_in_range(c)) throw std::runtime_error("process agent: control out of range");
    return c;
  }

 private:
  pid_t pid_ = -1;
  FILE* out_ = nullptr;
  FILE* in_ = nullptr;
};

/// Resolve an agent spec: a bundled profile name, or "proc:<command>".
inline AgentPtr make_agent(const std::string& spec,
                           const nlohmann::json& params = nlohmann::json::object()) {
  if (spec.rfind("proc:", 0) == 0) return std::make_unique<ProcessAgent>(spec.substr(5));
  return make_reference_agent(spec, params);
}

}  // namespace scenfuzz
