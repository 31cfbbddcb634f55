#include <gtest/gtest.h>

#include "scenfuzz/map.hpp"

using namespace scenfuzz;

namespace {

nlohmann::json straight_doc() {
  return nlohmann::json::parse(R"({
    "schema_version": 1,
    "name": "twolane",
    "waypoint_spacing": 5.0,
    "lanes": [
      {"id": 1, "centerline": [[0,0],[100,0]], "width": 3.5, "speed_limit": 10.0,
       "left_crossable": true, "right_crossable": false},
      {"id": 2, "centerline": [[0,3.5],[100,3.5]], "width": 3.5, "speed_limit": 10.0,
       "left_crossable": false, "right_crossable": true}
    ],
    "lights": [],
    "intersections": []
  })");
}

std::string data_path(const std::string& rel) { return std::string(SCENFUZZ_DATA_DIR) + "/" + rel; }

}  // namespace

TEST(Map, TwoLaneStraightHas21WaypointsPerLane) {
  const LaneMap m = load_map_from_json(straight_doc());
  ASSERT_EQ(m.lanes.size(), 2u);
  EXPECT_EQ(m.waypoints.size(), 42u);  // 100/5 + 1 per lane
}

TEST(Map, MissingSpeedLimitIsValidationError) {
  auto doc = straight_doc();
  doc["lanes"][0].erase("speed_limit");
  EXPECT_THROW(load_map_from_json(doc), ParseError);
}

TEST(Map, DegenerateLaneRejected) {
  auto doc = straight_doc();
  doc["lanes"][0]["centerline"] = {{5.0, 5.0}};
  EXPECT_THROW(load_map_from_json(doc), ValidationError);
  doc["lanes"][0]["centerline"] = {{5.0, 5.0}, {5.0, 5.0}};
  EXPECT_THROW(load_map_from_json(doc), ValidationError);
}

TEST(Map, UnknownLightReferenceRejected) {
  auto doc = straight_doc();
  doc["lanes"][0]["light_id"] = 99;
  EXPECT_THROW(load_map_from_json(doc), ValidationError);
}

TEST(Map, WrongSchemaVersionRejected) {
  auto doc = straight_doc();
  doc["schema_version"] = 2;
  EXPECT_THROW(load_map_from_json(doc), ValidationError);
}

TEST(Map, CrossmapFixtureHasFourLights) {
  const LaneMap m = load_map(data_path("maps/crossmap.json"));
  EXPECT_EQ(m.lights.size(), 4u);
  EXPECT_EQ(m.lanes.size(), 8u);
  ASSERT_EQ(m.intersections.size(), 1u);
  EXPECT_EQ(m.intersections[0].light_ids.size(), 4u);
}

TEST(Map, BundledMapsLoad) {
  for (const char* name : {"maps/straight2.json", "maps/crossmap.json", "maps/grid.json"}) {
    const LaneMap m = load_map(data_path(name));
    EXPECT_GT(m.lanes.size(), 0u) << name;
    EXPECT_GT(m.waypoints.size(), 0u) << name;
  }
}

TEST(Map, LightScheduleColorAt) {
  TrafficLight t;
  t.schedule = {{LightColor::green, 10.0}, {LightColor::red, 10.0}};
  EXPECT_EQ(t.color_at(0.0), LightColor::green);
  EXPECT_EQ(t.color_at(9.99), LightColor::green);
  EXPECT_EQ(t.color_at(10.25), LightColor::red);
  EXPECT_EQ(t.color_at(20.0), LightColor::green);  // wraps
  EXPECT_EQ(t.color_at(30.0 + 1e-9), LightColor::red);
}

TEST(Map, NearestLaneAndBounds) {
  const LaneMap m = load_map_from_json(straight_doc());
  const auto near = m.nearest_lane({50.0, 0.4});
  ASSERT_GE(near.lane_index, 0);
  EXPECT_EQ(m.lanes[static_cast<std::size_t>(near.lane_index)].id, 1);
  EXPECT_NEAR(near.distance, 0.4, 1e-9);
  EXPECT_NEAR(near.arc, 50.0, 1e-9);
  EXPECT_TRUE(m.on_some_lane({50.0, 1.0}));
  EXPECT_FALSE(m.on_some_lane({50.0, 9.0}));
  EXPECT_TRUE(m.in_bounds({50, 5}));
  EXPECT_FALSE(m.in_bounds({500, 5}));
}

TEST(Map, BoundariesCarryCrossability) {
  const LaneMap m = load_map_from_json(straight_doc());
  ASSERT_EQ(m.boundaries.size(), 4u);
  int non_crossable = 0;
  for (const auto& b : m.boundaries) non_crossable += b.crossable ? 0 : 1;
  EXPECT_EQ(non_crossable, 2);
}

TEST(Map, HashStableAndContentSensitive) {
  const LaneMap a = load_map_from_json(straight_doc());
  const LaneMap b = load_map_from_json(straight_doc());
  EXPECT_EQ(a.hash, b.hash);
  auto doc = straight_doc();
  doc["lanes"][0]["speed_limit"] = 11.0;
  EXPECT_NE(load_map_from_json(doc).hash, a.hash);
}
