#pragma once

#include <cstdint>
#include <string>

#include "scenfuzz/geometry.hpp"
#include "scenfuzz/types.hpp"

namespace scenfuzz {

enum class ViolationKind : std::uint8_t {
  collision = 0,
  lane_invasion = 1,
  speeding = 2,
  red_light = 3,
  stuck = 4,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::collision: return "collision";
    case ViolationKind::lane_invasion: return "lane_invasion";
    case ViolationKind::speeding: return "speeding";
    case ViolationKind::red_light: return "red_light";
    default: return "stuck";
  }
}

inline ViolationKind violation_kind_from_string(const std::string& s) {
  if (s == "collision") return ViolationKind::collision;
  if (s == "lane_invasion") return ViolationKind::lane_invasion;
  if (s == "speeding") return ViolationKind::speeding;
  if (s == "red_light") return ViolationKind::red_light;
  if (s == "stuck") return ViolationKind::stuck;
  throw ParseError("unknown violation kind '" + s + "'");
}

/// Typed, timestamped, located misbehavior event. Stamped at the start of
/// its maximal qualifying interval.
struct Violation {
  ViolationKind kind = ViolationKind::collision;
  std::uint32_t tick_index = 0;
  double sim_time = 0.0;
  Vec2 location{};
  int counterpart = -1;  // actor index, or -1 when not applicable
  std::string detail;
};

}  // namespace scenfuzz
