#include <gtest/gtest.h>

#include "scenfuzz/geometry.hpp"
#include "scenfuzz/rng.hpp"

using namespace scenfuzz;

TEST(Geometry, WrapAngle) {
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(-3 * kPi), kPi, 1e-12);  // -pi maps to +pi
  EXPECT_NEAR(wrap_angle(0.5), 0.5, 1e-12);
  EXPECT_NEAR(wrap_angle(2 * kPi + 0.25), 0.25, 1e-12);
}

TEST(Geometry, SegmentIntersection) {
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 1}));  // touching
}

TEST(Geometry, SegmentDistance) {
  EXPECT_DOUBLE_EQ(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(segment_segment_distance({0, 0}, {2, 2}, {0, 2}, {2, 0}), 0.0);
}

TEST(Geometry, PolylineArcQueries) {
  const Polyline p{{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(polyline_length(p), 20.0);
  const Vec2 q = point_at_arc(p, 15.0);
  EXPECT_NEAR(q.x, 10.0, 1e-12);
  EXPECT_NEAR(q.y, 5.0, 1e-12);
  EXPECT_NEAR(heading_at_arc(p, 5.0), 0.0, 1e-12);
  EXPECT_NEAR(heading_at_arc(p, 15.0), kPi / 2, 1e-12);
}

TEST(Geometry, ArcPolylineMatchesNaive) {
  Rng rng(21);
  Polyline p{{0, 0}};
  for (int i = 0; i < 30; ++i) {
    p.push_back(p.back() + Vec2{rng.uniform(0.5, 4.0), rng.uniform(-2.0, 2.0)});
  }
  const ArcPolyline ap(p);
  EXPECT_DOUBLE_EQ(ap.length(), polyline_length(p));
  for (int i = 0; i < 200; ++i) {
    const double s = rng.uniform(-5.0, ap.length() + 5.0);
    const Vec2 a = ap.at(s);
    const Vec2 b = point_at_arc(p, s);
    EXPECT_NEAR(a.x, b.x, 1e-9);
    EXPECT_NEAR(a.y, b.y, 1e-9);
  }
}

TEST(Geometry, ResampleKeepsEndpointsAndSpacing) {
  const Polyline p{{0, 0}, {100, 0}};
  const Polyline r = resample_polyline(p, 5.0);
  ASSERT_EQ(r.size(), 21u);  // 100/5 + 1
  EXPECT_EQ(r.front(), (Vec2{0, 0}));
  EXPECT_EQ(r.back(), (Vec2{100, 0}));
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_NEAR(dist(r[i - 1], r[i]), 5.0, 1e-9);

  // Non-multiple length keeps the true endpoint as a final short segment.
  const Polyline r2 = resample_polyline(Polyline{{0, 0}, {12, 0}}, 5.0);
  ASSERT_EQ(r2.size(), 4u);
  EXPECT_NEAR(r2.back().x, 12.0, 1e-12);
}

TEST(Geometry, PolylineSlice) {
  const Polyline p{{0, 0}, {10, 0}, {10, 10}};
  const Polyline s = polyline_slice(p, 5.0, 15.0);
  ASSERT_GE(s.size(), 3u);
  EXPECT_NEAR(s.front().x, 5.0, 1e-12);
  EXPECT_NEAR(s.back().y, 5.0, 1e-12);
  EXPECT_NEAR(polyline_length(s), 10.0, 1e-9);
}

TEST(Geometry, ProjectToPolyline) {
  const Polyline p{{0, 0}, {10, 0}};
  const auto proj = project_to_polyline(p, {3.0, 4.0});
  EXPECT_NEAR(proj.distance, 4.0, 1e-12);
  EXPECT_NEAR(proj.arc, 3.0, 1e-12);
}

TEST(Geometry, TurnAngleSign) {
  const Polyline left{{0, 0}, {1, 0}, {1, 1}};
  EXPECT_NEAR(turn_angle_at(left, 1), kPi / 2, 1e-12);
  const Polyline right{{0, 0}, {1, 0}, {1, -1}};
  EXPECT_NEAR(turn_angle_at(right, 1), -kPi / 2, 1e-12);
}

TEST(Geometry, ChordDeviationAreaZeroForStraight) {
  const Polyline p{{0, 0}, {5, 0}, {10, 0}};
  EXPECT_NEAR(chord_deviation_area(p), 0.0, 1e-12);
}

TEST(Geometry, ChordDeviationAreaTriangle) {
  const Polyline p{{0, 0}, {5, 5}, {10, 0}};
  EXPECT_NEAR(chord_deviation_area(p), 25.0, 1e-9);
}

TEST(Geometry, CircleFitRecoversRadius) {
  Polyline pts;
  for (int i = 0; i <= 10; ++i) {
    const double a = kPi / 2 * i / 10.0;
    pts.push_back({20 * std::cos(a) + 3, 20 * std::sin(a) - 7});
  }
  const auto fit = fit_circle(pts);
  ASSERT_TRUE(fit.ok);
  EXPECT_NEAR(fit.radius, 20.0, 1e-6);
  EXPECT_NEAR(fit.center.x, 3.0, 1e-6);
  EXPECT_NEAR(fit.center.y, -7.0, 1e-6);
}

TEST(Geometry, CircleFitRejectsCollinear) {
  EXPECT_FALSE(fit_circle(Polyline{{0, 0}, {1, 0}, {2, 0}, {3, 0}}).ok);
}

TEST(Geometry, PolygonContains) {
  const Polyline sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  EXPECT_TRUE(polygon_contains(sq, {5, 5}));
  EXPECT_FALSE(polygon_contains(sq, {15, 5}));
}

TEST(Geometry, ObbOverlap) {
  const Obb a{{0, 0}, 0.0, 4.5, 2.0};
  const Obb b{{4.0, 0}, 0.0, 4.5, 2.0};
  EXPECT_TRUE(obb_overlap(a, b));  // 4.5 m long boxes 4 m apart overlap
  const Obb c{{6.0, 0}, 0.0, 4.5, 2.0};
  EXPECT_FALSE(obb_overlap(a, c));
  const Obb rot{{0, 3.5}, kPi / 2, 4.5, 2.0};  // crosswise, clears the top edge
  EXPECT_FALSE(obb_overlap(a, rot));
  const Obb rot2{{0, 1.5}, kPi / 2, 4.5, 2.0};
  EXPECT_TRUE(obb_overlap(a, rot2));
}

TEST(Geometry, ObbDiscOverlap) {
  const Obb a{{0, 0}, 0.0, 4.5, 2.0};
  EXPECT_TRUE(obb_disc_overlap(a, {2.5, 0}, 0.4));
  EXPECT_FALSE(obb_disc_overlap(a, {3.0, 0}, 0.4));
  EXPECT_TRUE(obb_disc_overlap(a, {0, 1.3}, 0.4));
}

TEST(Geometry, BufferedPolylineIntersection) {
  const Polyline a{{0, 0}, {10, 0}};
  const Polyline b{{5, 1.5}, {5, 10}};
  EXPECT_TRUE(polylines_within_buffer(a, b, 2.0));
  EXPECT_FALSE(polylines_within_buffer(a, b, 1.0));
}

TEST(Geometry, SegmentGridFindsNeighbors) {
  SegmentGrid grid(10.0);
  grid.insert({0, 0}, {100, 0}, 7);
  grid.insert({0, 50}, {100, 50}, 8);
  int hits = 0;
  std::uint32_t payload = 0;
  grid.for_candidates({50, 2}, 5.0, [&](const SegmentGrid::Hit& h) {
    ++hits;
    payload = h.payload;
  });
  EXPECT_GE(hits, 1);
  EXPECT_EQ(payload, 7u);
}
