#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homesense/geometry.hpp"

namespace homesense {

enum class SensorKind { InfraredMotion, Pressure, Door, Flow, Power };

const char* to_string(SensorKind kind);
SensorKind sensor_kind_from_string(const std::string& name);

inline constexpr double kInfraredRadius = 0.5;
inline constexpr double kUprightRadius = 0.25;
inline constexpr double kFallenRadius = 0.75;

struct SensorSpec {
  int id = 0;
  SensorKind kind = SensorKind::InfraredMotion;
  Point position;
  double radius = kInfraredRadius;  // infrared detection circle
  Rect area;                        // pressure mat
  int sample_rate_hz = 10;
  std::string appliance;            // anchor name for flow/power sensors

  bool is_motion() const {
    return kind == SensorKind::InfraredMotion || kind == SensorKind::Pressure || kind == SensorKind::Door;
  }
  bool is_cost() const { return kind == SensorKind::Flow || kind == SensorKind::Power; }
};

struct Furniture {
  std::string name;
  Rect rect;
};

struct FloorPlan {
  double width = 0.0;
  double height = 0.0;
  std::vector<Furniture> furniture;
  std::map<std::string, Point> anchors;
  Point entrance;

  const Point& anchor(const std::string& name) const;
  bool has_anchor(const std::string& name) const { return anchors.count(name) != 0; }
};

struct SensorLayout {
  std::vector<SensorSpec> sensors;
  std::vector<int> bed_sensor_ids;
  int door_sensor_id = -1;
  std::vector<int> cost_sensor_ids;

  int size() const { return static_cast<int>(sensors.size()); }
  const SensorSpec& at(int id) const;
  std::vector<int> motion_sensor_ids() const;
  std::optional<int> sensor_for_appliance(const std::string& anchor) const;
};

struct Violation {
  std::string entity;
  std::string message;
};

std::pair<FloorPlan, SensorLayout> default_plan();

double sensor_distance(const SensorLayout& layout, int a, int b);

std::vector<Violation> validate(const FloorPlan& plan, const SensorLayout& layout);
// Also checks that every name in `required_anchors` resolves.
std::vector<Violation> validate(const FloorPlan& plan, const SensorLayout& layout,
                                const std::vector<std::string>& required_anchors);

}  // namespace homesense
