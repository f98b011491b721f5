#pragma once

#include <string>

#include <json.hpp>

#include "homesense/simulator.hpp"

namespace homesense {

struct RunConfig {
  SimulationConfig simulation = SimulationConfig::defaults();
  std::string output_dir = "out";

  static RunConfig defaults() { return {}; }
  void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

// Stable hash of the canonical JSON form.
std::string config_hash(const RunConfig& config);

nlohmann::json to_json(const FloorPlan& plan);
nlohmann::json to_json(const SensorLayout& layout);
nlohmann::json to_json(const ActivityTemplate& t);
FloorPlan floor_plan_from_json(const nlohmann::json& j);
SensorLayout sensor_layout_from_json(const nlohmann::json& j);
ActivityTemplate activity_template_from_json(const nlohmann::json& j);

}  // namespace homesense
