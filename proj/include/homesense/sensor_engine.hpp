#pragma once

#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "homesense/floor_plan.hpp"
#include "homesense/time.hpp"

namespace homesense {

struct SensorEvent {
  Tick time = 0;
  int sensor_id = 0;
  bool on = false;

  friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

inline bool event_order(const SensorEvent& a, const SensorEvent& b) {
  return a.time != b.time ? a.time < b.time : a.sensor_id < b.sensor_id;
}

struct PositionSample {
  Tick time = 0;
  Point position;
  bool moving = false;
  double body_radius = kUprightRadius;
  bool present = true;
};

struct ApplianceWindow {
  int sensor_id = 0;
  Tick start = 0;
  Tick end = 0;
};

struct OutingWindow {
  Tick start = 0;
  Tick end = 0;
};

using EventSink = std::function<void(const SensorEvent&)>;

// Single-pass transducer from position samples and scheduled appliance/door activity to
// time-ordered binary events. Changes within one tick are coalesced per sensor.
class SensorEngine {
 public:
  SensorEngine(const SensorLayout& layout, EventSink sink, double door_open_s = 3.0);

  // Samples must arrive in non-decreasing time order; the latest sample holds until the next.
  void observe(const PositionSample& sample);
  // Door ON at t for the configured open time.
  void door_crossing(Tick t);
  // Cost sensor ON over [start, end), snapped to the sensor's sample grid.
  void appliance_window(int sensor_id, Tick start, Tick end);
  // Flushes scheduled events before `horizon` and switches every ON sensor OFF at `horizon`.
  void finish(Tick horizon);

  std::size_t pending_scheduled() const { return scheduled_.size(); }

 private:
  struct Scheduled {
    Tick time;
    int sensor;
    bool on;
    bool operator>(const Scheduled& o) const {
      return time != o.time ? time > o.time : (sensor != o.sensor ? sensor > o.sensor : on > o.on);
    }
  };

  void set_state(Tick t, int sensor, bool on);
  void flush_tick();
  void apply_scheduled_through(Tick t);

  const SensorLayout& layout_;
  EventSink sink_;
  Tick door_open_ticks_;
  std::vector<int> infrared_;
  std::vector<int> pressure_;
  std::vector<char> committed_;
  std::vector<char> current_;
  std::vector<int> dirty_;
  Tick tick_ = -1;
  Tick last_sample_ = -1;
  std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> scheduled_;
};

// Batch form: appliance windows are merged per sensor, outings fire the door at both ends
// and mark the resident absent.
std::vector<SensorEvent> run_sensors(std::span<const PositionSample> positions,
                                     std::span<const ApplianceWindow> appliance_windows,
                                     std::span<const OutingWindow> outing_windows, const SensorLayout& layout,
                                     Tick horizon, double door_open_s = 3.0);

// Merges overlapping or touching windows of the same sensor.
std::vector<ApplianceWindow> merge_windows(std::vector<ApplianceWindow> windows);

}  // namespace homesense
