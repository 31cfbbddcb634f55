#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

namespace scenfuzz {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 rotate(Vec2 v, double ang) {
  const double c = std::cos(ang), s = std::sin(ang);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline Vec2 unit(Vec2 v) {
  const double n = norm(v);
  return n > 0 ? v / n : Vec2{1, 0};
}
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Normalize angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  if (a > kPi) a -= 2 * kPi;
  return a;
}

// ---------------------------------------------------------------------------
// Segments

inline Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 <= 0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + d * t;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  return dist(p, closest_point_on_segment(p, a, b));
}

/// Proper or touching intersection of segments [a,b] and [c,d].
inline bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    const double v = cross(q - p, r - p);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  const auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, r.x) - 1e-12 <= q.x && q.x <= std::max(p.x, r.x) + 1e-12 &&
           std::min(p.y, r.y) - 1e-12 <= q.y && q.y <= std::max(p.y, r.y) + 1e-12;
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_seg(a, c, b)) return true;
  if (o2 == 0 && on_seg(a, d, b)) return true;
  if (o3 == 0 && on_seg(c, a, d)) return true;
  if (o4 == 0 && on_seg(c, b, d)) return true;
  return false;
}

inline double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min(std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)),
                  std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)));
}

// ---------------------------------------------------------------------------
// Polylines

using Polyline = std::vector<Vec2>;

inline double polyline_length(const Polyline& p) {
  double len = 0;
  for (std::size_t i = 1; i < p.size(); ++i) len += dist(p[i - 1], p[i]);
  return len;
}

/// Point at arc length s along the polyline, clamped to [0, length].
inline Vec2 point_at_arc(const Polyline& p, double s) {
  if (p.empty()) return {};
  if (s <= 0) return p.front();
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double seg = dist(p[i - 1], p[i]);
    if (s <= seg) {
      return seg > 0 ? p[i - 1] + (p[i] - p[i - 1]) * (s / seg) : p[i - 1];
    }
    s -= seg;
  }
  return p.back();
}

/// Heading of the segment containing arc length s.
inline double heading_at_arc(const Polyline& p, double s) {
  if (p.size() < 2) return 0.0;
  double acc = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double seg = dist(p[i - 1], p[i]);
    if (s <= acc + seg || i + 1 == p.size()) {
      const Vec2 d = p[i] - p[i - 1];
      return std::atan2(d.y, d.x);
    }
    acc += seg;
  }
  return 0.0;
}

/// Polyline with precomputed cumulative arc lengths for O(log n) queries.
class ArcPolyline {
 public:
  ArcPolyline() = default;
  explicit ArcPolyline(Polyline pts) : pts_(std::move(pts)) {
    cum_.resize(pts_.size(), 0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) cum_[i] = cum_[i - 1] + dist(pts_[i - 1], pts_[i]);
  }

  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
  const Polyline& points() const { return pts_; }

  Vec2 at(double s) const {
    if (pts_.empty()) return {};
    if (s <= 0) return pts_.front();
    if (s >= length()) return pts_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    const double seg = cum_[i] - cum_[i - 1];
    const double t = seg > 0 ? (s - cum_[i - 1]) / seg : 0.0;
    return pts_[i - 1] + (pts_[i] - pts_[i - 1]) * t;
  }

  double heading(double s) const {
    if (pts_.size() < 2) return 0.0;
    std::size_t i =
        static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin());
    i = std::clamp<std::size_t>(i, 1, pts_.size() - 1);
    const Vec2 d = pts_[i] - pts_[i - 1];
    return std::atan2(d.y, d.x);
  }

 private:
  Polyline pts_;
  std::vector<double> cum_;
};

struct PolylineProjection {
  double arc = 0;       // arc length of the closest point
  double distance = 0;  // distance from the query point
  Vec2 point{};         // the closest point itself
};

inline PolylineProjection project_to_polyline(const Polyline& p, Vec2 q) {
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  if (p.empty()) return best;
  if (p.size() == 1) return {0.0, dist(q, p[0]), p[0]};
  double acc = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const Vec2 c = closest_point_on_segment(q, p[i - 1], p[i]);
    const double d = dist(q, c);
    if (d < best.distance) {
      best.distance = d;
      best.point = c;
      best.arc = acc + dist(p[i - 1], c);
    }
    acc += dist(p[i - 1], p[i]);
  }
  return best;
}

/// Resample at fixed spacing, always keeping both endpoints. A polyline of
/// length L yields floor(L/spacing)+1 interior-spaced points plus the final
/// endpoint when L is not a multiple of spacing.
inline Polyline resample_polyline(const Polyline& p, double spacing) {
  Polyline out;
  if (p.empty()) return out;
  const double len = polyline_length(p);
  const auto n = static_cast<std::size_t>(std::floor(len / spacing + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(point_at_arc(p, spacing * static_cast<double>(i)));
  if (len - spacing * static_cast<double>(n) > 1e-6) out.push_back(p.back());
  return out;
}

/// Sub-polyline between arc lengths s0 < s1, with interpolated endpoints.
inline Polyline polyline_slice(const Polyline& p, double s0, double s1) {
  Polyline out;
  if (p.size() < 2 || s1 <= s0) return out;
  const double len = polyline_length(p);
  s0 = std::clamp(s0, 0.0, len);
  s1 = std::clamp(s1, 0.0, len);
  out.push_back(point_at_arc(p, s0));
  double acc = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    acc += dist(p[i - 1], p[i]);
    if (acc > s0 + 1e-9 && acc < s1 - 1e-9) out.push_back(p[i]);
  }
  const Vec2 tail = point_at_arc(p, s1);
  if (dist(out.back(), tail) > 1e-9) out.push_back(tail);
  if (out.size() < 2) out.push_back(tail + Vec2{1e-6, 0});
  return out;
}

/// Signed turn angle at interior vertex i (positive = left/CCW).
inline double turn_angle_at(const Polyline& p, std::size_t i) {
  const Vec2 u = p[i] - p[i - 1];
  const Vec2 v = p[i + 1] - p[i];
  return std::atan2(cross(u, v), dot(u, v));
}

/// Unsigned area enclosed between a polyline and its start-end chord.
inline double chord_deviation_area(const Polyline& p) {
  if (p.size() < 3) return 0.0;
  double a = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) a += cross(p[i], p[i + 1]);
  a += cross(p.back(), p.front());  // close with the chord
  return std::abs(a) * 0.5;
}

/// True if any segment of a comes within `buffer` of any segment of b.
inline bool polylines_within_buffer(const Polyline& a, const Polyline& b, double buffer) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (std::size_t j = 1; j < b.size(); ++j) {
      if (segment_segment_distance(a[i - 1], a[i], b[j - 1], b[j]) <= buffer) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Circle fit

struct CircleFit {
  Vec2 center{};
  double radius = 0;
  bool ok = false;
};

/// Algebraic least-squares circle fit (Kasa). Degenerates (collinear points)
/// report ok = false.
inline CircleFit fit_circle(const Polyline& pts) {
  CircleFit out;
  if (pts.size() < 3) return out;
  double sx = 0, sy = 0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double suu = 0, suv = 0, svv = 0, suuu = 0, svvv = 0, suvv = 0, svuu = 0;
  for (const auto& p : pts) {
    const double u = p.x - mx, v = p.y - my;
    suu += u * u;
    suv += u * v;
    svv += v * v;
    suuu += u * u * u;
    svvv += v * v * v;
    suvv += u * v * v;
    svuu += v * u * u;
  }
  const double det = suu * svv - suv * suv;
  if (std::abs(det) < 1e-12) return out;
  const double uc = (svv * (suuu + suvv) - suv * (svvv + svuu)) / (2 * det);
  const double vc = (suu * (svvv + svuu) - suv * (suuu + suvv)) / (2 * det);
  out.center = {uc + mx, vc + my};
  out.radius = std::sqrt(uc * uc + vc * vc + (suu + svv) / static_cast<double>(pts.size()));
  out.ok = std::isfinite(out.radius);
  return out;
}

// ---------------------------------------------------------------------------
// Polygons and boxes

inline bool polygon_contains(const Polyline& poly, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      const double xint =
          poly[j].x + (poly[i].x - poly[j].x) * (p.y - poly[j].y) / (poly[i].y - poly[j].y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

/// Oriented bounding box: center, yaw, full length (along yaw) and width.
struct Obb {
  Vec2 center{};
  double yaw = 0;
  double length = 0;
  double width = 0;

  std::array<Vec2, 4> corners() const {
    const Vec2 f = rotate({1, 0}, yaw) * (length * 0.5);
    const Vec2 s = rotate({0, 1}, yaw) * (width * 0.5);
    return {center + f + s, center + f - s, center - f - s, center - f + s};
  }
};

/// Separating-axis overlap test for two oriented rectangles.
inline bool obb_overlap(const Obb& a, const Obb& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {rotate({1, 0}, a.yaw), rotate({0, 1}, a.yaw),
                                    rotate({1, 0}, b.yaw), rotate({0, 1}, b.yaw)};
  for (const Vec2& ax : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const Vec2& c : ca) {
      const double v = dot(c, ax);
      amin = std::min(amin, v);
      amax = std::max(amax, v);
    }
    for (const Vec2& c : cb) {
      const double v = dot(c, ax);
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

/// Rectangle vs disc overlap: distance from center to the box in box frame.
inline bool obb_disc_overlap(const Obb& a, Vec2 center, double radius) {
  const Vec2 rel = rotate(center - a.center, -a.yaw);
  const double dx = std::max(std::abs(rel.x) - a.length * 0.5, 0.0);
  const double dy = std::max(std::abs(rel.y) - a.width * 0.5, 0.0);
  return dx * dx + dy * dy <= radius * radius;
}

// ---------------------------------------------------------------------------
// Spatial hash over segments

/// Uniform-grid index over line segments for nearest-lane and boundary
/// queries. Cell size should be at least the typical query radius.
class SegmentGrid {
 public:
  explicit SegmentGrid(double cell = 10.0) : cell_(cell) {}

  void insert(Vec2 a, Vec2 b, std::uint32_t payload) {
    const std::size_t idx = segs_.size();
    segs_.push_back({a, b, payload});
    const auto [ilo, jlo] = cell_of({std::min(a.x, b.x), std::min(a.y, b.y)});
    const auto [ihi, jhi] = cell_of({std::max(a.x, b.x), std::max(a.y, b.y)});
    for (std::int64_t i = ilo; i <= ihi; ++i) {
      for (std::int64_t j = jlo; j <= jhi; ++j) {
        cells_[key(i, j)].push_back(idx);
      }
    }
  }

  struct Hit {
    Vec2 a{}, b{};
    std::uint32_t payload = 0;
  };

  /// All segments whose cells intersect the disc (point, radius).
  /// Candidates may be farther than radius; callers re-check distances.
  template <typename Fn>
  void for_candidates(Vec2 p, double radius, Fn&& fn) const {
    const auto [ilo, jlo] = cell_of({p.x - radius, p.y - radius});
    const auto [ihi, jhi] = cell_of({p.x + radius, p.y + radius});
    for (std::int64_t i = ilo; i <= ihi; ++i) {
      for (std::int64_t j = jlo; j <= jhi; ++j) {
        const auto it = cells_.find(key(i, j));
        if (it == cells_.end()) continue;
        for (const std::size_t idx : it->second) {
          const auto& s = segs_[idx];
          fn(Hit{s.a, s.b, s.payload});
        }
      }
    }
  }

  bool empty() const { return segs_.empty(); }

 private:
  struct Seg {
    Vec2 a{}, b{};
    std::uint32_t payload = 0;
  };

  std::pair<std::int64_t, std::int64_t> cell_of(Vec2 p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }

  static std::uint64_t key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
  }

  double cell_;
  std::vector<Seg> segs_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

}  // namespace scenfuzz
