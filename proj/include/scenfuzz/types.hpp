#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "scenfuzz/geometry.hpp"

namespace scenfuzz {

// Fixed simulation time base: 20 Hz.
inline constexpr double kTickSeconds = 0.05;
inline constexpr int kTicksPerSecond = 20;

// Vehicle kinematics (typical sedan figures; the physics constants live in
// SimParams so experiments can vary them).
inline constexpr double kVehicleLength = 4.5;
inline constexpr double kVehicleWidth = 2.0;
inline constexpr double kPedestrianRadius = 0.4;

enum class ActorKind : std::uint8_t { ego = 0, npc = 1, pedestrian = 2 };

inline const char* to_string(ActorKind k) {
  switch (k) {
    case ActorKind::ego: return "ego";
    case ActorKind::npc: return "npc";
    default: return "pedestrian";
  }
}

struct ActorState {
  Vec2 position{};
  Vec2 velocity{};
  Vec2 acceleration{};
  double yaw = 0.0;  // normalized to (-pi, pi]
  ActorKind kind = ActorKind::npc;

  double speed() const { return norm(velocity); }
};

/// Agent output. Throttle and brake may both be nonzero; brake wins.
struct Control {
  double throttle = 0.0;  // [0, 1]
  double brake = 0.0;     // [0, 1]
  double steer = 0.0;     // [-1, 1]
};

inline bool control_in_range(const Control& c) {
  return c.throttle >= 0 && c.throttle <= 1 && c.brake >= 0 && c.brake <= 1 && c.steer >= -1 &&
         c.steer <= 1;
}

struct WeatherParams {
  double rain_intensity = 0.0;   // [0, 100]
  double sun_altitude_deg = 45;  // [-90, 90]
  double fog_density = 0.0;      // [0, 100]
};

inline bool weather_in_range(const WeatherParams& w) {
  return w.rain_intensity >= 0 && w.rain_intensity <= 100 && w.sun_altitude_deg >= -90 &&
         w.sun_altitude_deg <= 90 && w.fog_density >= 0 && w.fog_density <= 100;
}

// Error taxonomy mirrored by CLI exit codes: usage 1, config/validation 2,
// integrity 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};
struct ConfigError : ValidationError {
  using ValidationError::ValidationError;
};
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scenfuzz
