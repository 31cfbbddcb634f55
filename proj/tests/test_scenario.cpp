#include <gtest/gtest.h>

#include "scenfuzz/rng.hpp"
#include "scenfuzz/scenario.hpp"
#include "test_util.hpp"

using namespace scenfuzz;

TEST(Route, BuildOnSingleLane) {
  const Route r = build_lane_route(testutil::straight2(), {1}, 10.0, 60.0);
  EXPECT_NEAR(r.length(), 50.0, 1e-9);
  EXPECT_NEAR(r.start().x, 10.0, 1e-9);
  EXPECT_NEAR(r.end().x, 60.0, 1e-9);
  ASSERT_FALSE(r.sections.empty());
  EXPECT_EQ(r.sections[0].lane_id, 1);
  EXPECT_DOUBLE_EQ(r.speed_limit_at(25.0), 10.0);
  EXPECT_TRUE(r.light_stops.empty());
}

TEST(Route, CrossmapRouteBridgesIntersectionAndStopsAtLight) {
  const auto& map = testutil::crossmap();
  // Inbound from the east (lane 1) continuing straight to the west outbound
  // lane (lane 7).
  const Route r = build_lane_route(map, {1, 7}, 0.0, 90.0);
  ASSERT_GE(r.sections.size(), 3u);  // inbound, bridge, outbound
  ASSERT_EQ(r.light_stops.size(), 1u);
  EXPECT_EQ(r.light_stops[0].light_id, 1);
  // The stop line sits at the end of the 100 m inbound lane.
  EXPECT_NEAR(r.light_stops[0].arc, 100.0, 1e-6);
  EXPECT_TRUE(r.next_light_stop(50.0).has_value());
  EXPECT_FALSE(r.next_light_stop(101.0).has_value());
}

TEST(Route, SampleVehicleRouteStartsOnLane) {
  const auto& map = testutil::grid();
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const Route r = sample_vehicle_route(map, rng);
    ASSERT_TRUE(r.valid());
    const auto near = map.nearest_lane(r.start());
    ASSERT_GE(near.lane_index, 0);
    EXPECT_LT(near.distance, 0.5);
    EXPECT_GE(r.length(), 25.0);
  }
}

TEST(Scenario, SampleProducesValidScenarios) {
  const auto& map = testutil::grid();
  Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    const Scenario s = sample_scenario(map, rng);
    EXPECT_NO_THROW(validate_scenario(map, s));
    EXPECT_EQ(s.npc_routes.size(), 2u);
    EXPECT_EQ(s.pedestrian_routes.size(), 10u);
  }
}

TEST(Scenario, SpawnSpacingViolationDetected) {
  Scenario s = testutil::straight_scenario();
  s.npc_routes.push_back(build_lane_route(testutil::straight2(), {1}, 1.0, 50.0));
  const auto [a, b] = spawn_overlap(s);
  EXPECT_EQ(a, 0);
  EXPECT_EQ(b, 1);
  EXPECT_THROW(validate_scenario(testutil::straight2(), s), ValidationError);
}

TEST(Scenario, OffRoadStartRejected) {
  Scenario s = testutil::straight_scenario();
  s.ego_route = make_walk_route({0, 50}, {50, 50});  // nowhere near a lane
  EXPECT_THROW(validate_scenario(testutil::straight2(), s), ValidationError);
}

TEST(Scenario, WeatherRangeEnforced) {
  Scenario s = testutil::straight_scenario();
  s.weather.rain_intensity = 140.0;
  EXPECT_THROW(validate_scenario(testutil::straight2(), s), ValidationError);
}

TEST(Scenario, JsonRoundTripExact) {
  const auto& map = testutil::grid();
  Rng rng(31);
  const Scenario s = sample_scenario(map, rng);
  const Scenario t = scenario_from_json(scenario_to_json(s));
  ASSERT_EQ(t.npc_routes.size(), s.npc_routes.size());
  ASSERT_EQ(t.pedestrian_routes.size(), s.pedestrian_routes.size());
  ASSERT_EQ(t.ego_route.points.size(), s.ego_route.points.size());
  for (std::size_t i = 0; i < s.ego_route.points.size(); ++i) {
    EXPECT_EQ(t.ego_route.points[i], s.ego_route.points[i]);  // bit-exact doubles
  }
  EXPECT_EQ(t.weather.sun_altitude_deg, s.weather.sun_altitude_deg);
  EXPECT_EQ(t.ego_route.light_stops.size(), s.ego_route.light_stops.size());
}

TEST(Scenario, PushOffLanesLeavesCarriageway) {
  const auto& map = testutil::straight2();
  const Vec2 p = push_off_lanes(map, {50.0, 0.2});
  const auto near = map.nearest_lane(p);
  ASSERT_GE(near.lane_index, 0);
  EXPECT_GT(near.distance, map.lanes[static_cast<std::size_t>(near.lane_index)].width * 0.5);
}
