#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "homesense/floor_plan.hpp"
#include "homesense/sensor_engine.hpp"

namespace homesense {

struct ForgettingWindow {
  std::int64_t on_ticks = 0;  // f1 in 0.1 s units
  double max_distance = 0.0;  // f2

  double f1() const { return static_cast<double>(on_ticks) / kTicksPerSecond; }
  double f2() const { return max_distance; }
  friend bool operator==(const ForgettingWindow&, const ForgettingWindow&) = default;
};

// Streaming per-window features: f1 = cost-sensor ON time summed over cost sensors,
// f2 = largest distance from an ON cost sensor to any other sensor ON at the same time.
class ForgettingExtractor {
 public:
  using WindowSink = std::function<void(std::int64_t window, const ForgettingWindow&)>;
  ForgettingExtractor(const SensorLayout& layout, std::int64_t horizon_seconds, WindowSink sink,
                      std::int64_t window_seconds = 7200);

  void push(const SensorEvent& e);
  void finish();

 private:
  void advance(Tick t);

  std::int64_t horizon_ticks_;
  std::int64_t window_ticks_;
  WindowSink sink_;
  std::vector<char> is_cost_;
  std::vector<std::vector<double>> dist_;
  std::vector<char> on_;
  std::vector<int> on_list_;
  Tick now_ = 0;
  std::int64_t window_ = 0;
  ForgettingWindow acc_;
};

std::vector<ForgettingWindow> forgetting_features(std::span<const SensorEvent> events, const SensorLayout& layout,
                                                  std::int64_t horizon_seconds, std::int64_t window_seconds = 7200);

}  // namespace homesense
