#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "homesense/floor_plan.hpp"
#include "homesense/geometry.hpp"

using namespace homesense;

TEST_CASE("default plan has the expected sensor inventory") {
  auto [plan, layout] = default_plan();
  CHECK(layout.size() == 41);
  CHECK(layout.bed_sensor_ids == std::vector<int>{23, 34, 35});
  CHECK(layout.cost_sensor_ids.size() == 4);
  CHECK(layout.door_sensor_id == 40);
  CHECK(plan.width == doctest::Approx(5.0));
  CHECK(plan.height == doctest::Approx(12.0));
  for (int i = 0; i <= 33; ++i) CHECK(layout.at(i).kind == SensorKind::InfraredMotion);
  CHECK(layout.at(34).kind == SensorKind::Pressure);
  CHECK(layout.at(35).kind == SensorKind::Pressure);
  CHECK(layout.at(36).kind == SensorKind::Flow);
  CHECK(layout.at(37).kind == SensorKind::Flow);
  CHECK(layout.at(38).kind == SensorKind::Power);
  CHECK(layout.at(39).kind == SensorKind::Power);
  CHECK(layout.at(40).kind == SensorKind::Door);
  CHECK(layout.motion_sensor_ids().size() == 37);
  for (const char* name : {"chair", "cupboard", "dining_table", "kitchen_stove", "refrigerator", "trash_box", "wardrobe",
                           "washing_machine", "water_closet", "bed", "sofa"}) {
    bool found = false;
    for (const auto& f : plan.furniture) found = found || f.name == name;
    CHECK_MESSAGE(found, name);
  }
}

TEST_CASE("default plan validates cleanly") {
  auto [plan, layout] = default_plan();
  CHECK(validate(plan, layout).empty());
}

TEST_CASE("validate reports an out-of-bounds sensor") {
  auto [plan, layout] = default_plan();
  layout.sensors[5].position = {-1.0, 0.0};
  auto v = validate(plan, layout);
  REQUIRE(v.size() == 1);
  CHECK(v[0].entity == "sensor #5");
}

TEST_CASE("validate reports a duplicate sensor id") {
  auto [plan, layout] = default_plan();
  layout.sensors[6].id = 5;
  auto v = validate(plan, layout);
  REQUIRE(v.size() == 1);
  CHECK(v[0].entity == "sensor #5");
  CHECK(v[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("sensor_distance basics") {
  SensorLayout layout;
  SensorSpec a, b;
  a.id = 0;
  a.position = {0.0, 0.0};
  b.id = 1;
  b.position = {3.0, 4.0};
  layout.sensors = {a, b};
  CHECK(sensor_distance(layout, 0, 1) == doctest::Approx(5.0));
  CHECK(sensor_distance(layout, 1, 1) == 0.0);
  CHECK_THROWS(sensor_distance(layout, 0, 7));
}

TEST_CASE("sensor_distance matches a direct recomputation and is a metric on the default layout") {
  auto [plan, layout] = default_plan();
  const int S = layout.size();
  for (int a = 0; a < S; ++a) {
    for (int b = 0; b < S; ++b) {
      const auto p = layout.sensors[a].position, q = layout.sensors[b].position;
      const double direct = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
      const double d = sensor_distance(layout, a, b);
      CHECK(d == doctest::Approx(direct).epsilon(1e-12));
      CHECK(d >= 0.0);
      CHECK(d == sensor_distance(layout, b, a));
      for (int c = 0; c < S; ++c) CHECK(d <= sensor_distance(layout, a, c) + sensor_distance(layout, c, b) + 1e-12);
    }
  }
}

TEST_CASE("open-disc intersection ignores touching boundaries") {
  CHECK(discs_intersect({0, 0}, 0.5, {0.74, 0}, 0.25));
  CHECK_FALSE(discs_intersect({0, 0}, 0.5, {0.75, 0}, 0.25));
  CHECK(disc_intersects_rect({0, 0}, 0.3, Rect{0.2, -1, 1, 1}));
  CHECK_FALSE(disc_intersects_rect({0, 0}, 0.2, Rect{0.2, -1, 1, 1}));
}
