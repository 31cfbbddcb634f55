#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scenfuzz/map.hpp"
#include "scenfuzz/scenario.hpp"
#include "scenfuzz/types.hpp"
#include "scenfuzz/violation.hpp"

namespace scenfuzz {

inline constexpr int kSignalsPerVehicle = 7;  // loc_x loc_y speed_x speed_y acc_x acc_y yaw

/// Per-tick feedback for every vehicle (ego first, then NPCs in spawn
/// order). Pedestrians are logged separately in the Trace.
struct SceneRecord {
  std::uint32_t tick_index = 0;
  std::vector<double> values;  // 7 * m, vehicle-major

  std::size_t vehicle_count() const { return values.size() / kSignalsPerVehicle; }

  double loc_x(std::size_t v) const { return values[v * kSignalsPerVehicle + 0]; }
  double loc_y(std::size_t v) const { return values[v * kSignalsPerVehicle + 1]; }
  double speed_x(std::size_t v) const { return values[v * kSignalsPerVehicle + 2]; }
  double speed_y(std::size_t v) const { return values[v * kSignalsPerVehicle + 3]; }
  double acc_x(std::size_t v) const { return values[v * kSignalsPerVehicle + 4]; }
  double acc_y(std::size_t v) const { return values[v * kSignalsPerVehicle + 5]; }
  double yaw(std::size_t v) const { return values[v * kSignalsPerVehicle + 6]; }

  Vec2 position(std::size_t v) const { return {loc_x(v), loc_y(v)}; }
};

enum class TerminationReason : std::uint8_t {
  timeout = 0,
  collision = 1,
  arrival = 2,
  agent_fault = 3,
};

inline const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::timeout: return "timeout";
    case TerminationReason::collision: return "collision";
    case TerminationReason::arrival: return "arrival";
    default: return "agent_fault";
  }
}

inline TerminationReason termination_from_string(const std::string& s) {
  if (s == "timeout") return TerminationReason::timeout;
  if (s == "collision") return TerminationReason::collision;
  if (s == "arrival") return TerminationReason::arrival;
  if (s == "agent_fault") return TerminationReason::agent_fault;
  throw ParseError("unknown termination reason '" + s + "'");
}

struct LightEvent {
  std::uint32_t tick = 0;
  int light_id = 0;
  LightColor color = LightColor::green;
};

/// Recorded execution of a scenario. All per-tick logs share length T.
struct Trace {
  Scenario scenario;
  std::uint64_t seed = 0;
  std::string agent_profile;

  std::vector<SceneRecord> scenes;                      // length T
  std::vector<std::vector<Vec2>> pedestrian_positions;  // length T, one entry per pedestrian
  std::vector<Control> ego_controls;                    // length T (control applied at that tick)
  std::vector<LightEvent> light_events;                 // change log (tick 0 carries initial colors)
  TerminationReason termination = TerminationReason::timeout;
  std::string fault_message;  // populated for agent_fault

  std::vector<Violation> violations;  // filled by oracles::detect

  std::size_t tick_count() const { return scenes.size(); }
  std::size_t vehicle_count() const { return scenes.empty() ? 0 : scenes[0].vehicle_count(); }

  LightColor light_color_at(std::uint32_t tick, int light_id) const {
    LightColor color = LightColor::green;
    bool seen = false;
    for (const auto& e : light_events) {
      if (e.light_id != light_id || e.tick > tick) continue;
      color = e.color;
      seen = true;
    }
    if (!seen) throw ValidationError("no light event log for light " + std::to_string(light_id));
    return color;
  }
};

/// T x |V| x |V| Euclidean distances between vehicle centers.
struct DistMatrix {
  std::size_t ticks = 0;
  std::size_t vehicles = 0;
  std::vector<double> values;  // tick-major, then row-major |V| x |V|

  double at(std::size_t t, std::size_t a, std::size_t b) const {
    return values[(t * vehicles + a) * vehicles + b];
  }
};

inline DistMatrix distance_matrix(const Trace& trace) {
  DistMatrix m;
  m.ticks = trace.tick_count();
  m.vehicles = trace.vehicle_count();
  m.values.assign(m.ticks * m.vehicles * m.vehicles, 0.0);
  for (std::size_t t = 0; t < m.ticks; ++t) {
    const auto& rec = trace.scenes[t];
    for (std::size_t a = 0; a < m.vehicles; ++a) {
      for (std::size_t b = a + 1; b < m.vehicles; ++b) {
        const double d = dist(rec.position(a), rec.position(b));
        m.values[(t * m.vehicles + a) * m.vehicles + b] = d;
        m.values[(t * m.vehicles + b) * m.vehicles + a] = d;
      }
    }
  }
  return m;
}

/// Smallest observed distance between the ego and any other vehicle over the
/// whole trace. Returns +inf when the ego is the only vehicle.
inline double min_distance(const DistMatrix& m, std::size_t ego_index = 0) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < m.ticks; ++t) {
    for (std::size_t v = 0; v < m.vehicles; ++v) {
      if (v == ego_index) continue;
      best = std::min(best, m.at(t, ego_index, v));
    }
  }
  return best;
}

}  // namespace scenfuzz
