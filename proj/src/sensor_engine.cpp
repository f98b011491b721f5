#include "homesense/sensor_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homesense {

SensorEngine::SensorEngine(const SensorLayout& layout, EventSink sink, double door_open_s)
    : layout_(layout),
      sink_(std::move(sink)),
      door_open_ticks_(std::max<Tick>(1, ticks_from_seconds(door_open_s))),
      committed_(layout.size(), 0),
      current_(layout.size(), 0) {
  for (const auto& s : layout.sensors) {
    if (s.kind == SensorKind::InfraredMotion) infrared_.push_back(s.id);
    if (s.kind == SensorKind::Pressure) pressure_.push_back(s.id);
  }
}

void SensorEngine::set_state(Tick t, int sensor, bool on) {
  if (t < tick_) throw std::logic_error("sensor engine received an event out of time order");
  if (t != tick_) {
    flush_tick();
    tick_ = t;
  }
  if (current_[sensor] == static_cast<char>(on)) return;
  current_[sensor] = on;
  dirty_.push_back(sensor);
}

void SensorEngine::flush_tick() {
  if (dirty_.empty()) return;
  std::sort(dirty_.begin(), dirty_.end());
  dirty_.erase(std::unique(dirty_.begin(), dirty_.end()), dirty_.end());
  for (int s : dirty_) {
    if (current_[s] != committed_[s]) {
      committed_[s] = current_[s];
      sink_(SensorEvent{tick_, s, current_[s] != 0});
    }
  }
  dirty_.clear();
}

void SensorEngine::apply_scheduled_through(Tick t) {
  while (!scheduled_.empty() && scheduled_.top().time <= t) {
    Scheduled e = scheduled_.top();
    scheduled_.pop();
    set_state(e.time, e.sensor, e.on);
  }
}

void SensorEngine::observe(const PositionSample& sample) {
  if (sample.time < last_sample_) throw std::logic_error("position samples must be time-ordered");
  last_sample_ = sample.time;
  apply_scheduled_through(sample.time);
  for (int id : infrared_) {
    const auto& s = layout_.sensors[id];
    bool on = sample.present && sample.moving &&
              discs_intersect(sample.position, sample.body_radius, s.position, s.radius);
    if (on != (current_[id] != 0)) set_state(sample.time, id, on);
  }
  for (int id : pressure_) {
    const auto& s = layout_.sensors[id];
    bool on = sample.present && disc_intersects_rect(sample.position, sample.body_radius, s.area);
    if (on != (current_[id] != 0)) set_state(sample.time, id, on);
  }
}

void SensorEngine::door_crossing(Tick t) {
  int door = layout_.door_sensor_id;
  scheduled_.push({t, door, true});
  scheduled_.push({t + door_open_ticks_, door, false});
}

void SensorEngine::appliance_window(int sensor_id, Tick start, Tick end) {
  const auto& s = layout_.at(sensor_id);
  Tick step = kTicksPerSecond / std::max(1, std::min(s.sample_rate_hz, static_cast<int>(kTicksPerSecond)));
  Tick on = ceil_to(start, step);
  Tick off = ceil_to(end, step);
  if (off <= on) return;
  scheduled_.push({on, sensor_id, true});
  scheduled_.push({off, sensor_id, false});
}

void SensorEngine::finish(Tick horizon) {
  apply_scheduled_through(horizon - 1);
  while (!scheduled_.empty()) scheduled_.pop();
  for (int s = 0; s < layout_.size(); ++s)
    if (current_[s]) set_state(horizon, s, false);
  flush_tick();
}

std::vector<ApplianceWindow> merge_windows(std::vector<ApplianceWindow> windows) {
  std::sort(windows.begin(), windows.end(), [](const ApplianceWindow& a, const ApplianceWindow& b) {
    return a.sensor_id != b.sensor_id ? a.sensor_id < b.sensor_id : a.start < b.start;
  });
  std::vector<ApplianceWindow> out;
  for (const auto& w : windows) {
    if (w.end <= w.start) continue;
    if (!out.empty() && out.back().sensor_id == w.sensor_id && w.start <= out.back().end) {
      out.back().end = std::max(out.back().end, w.end);
    } else {
      out.push_back(w);
    }
  }
  return out;
}

std::vector<SensorEvent> run_sensors(std::span<const PositionSample> positions,
                                     std::span<const ApplianceWindow> appliance_windows,
                                     std::span<const OutingWindow> outing_windows, const SensorLayout& layout,
                                     Tick horizon, double door_open_s) {
  std::vector<SensorEvent> events;
  SensorEngine engine(layout, [&](const SensorEvent& e) { events.push_back(e); }, door_open_s);
  std::vector<ApplianceWindow> merged =
      merge_windows(std::vector<ApplianceWindow>(appliance_windows.begin(), appliance_windows.end()));
  for (const auto& w : merged) engine.appliance_window(w.sensor_id, w.start, w.end);
  std::vector<OutingWindow> outings(outing_windows.begin(), outing_windows.end());
  std::sort(outings.begin(), outings.end(), [](const OutingWindow& a, const OutingWindow& b) { return a.start < b.start; });
  for (const auto& o : outings) {
    engine.door_crossing(o.start);
    engine.door_crossing(o.end);
  }
  auto absent_at = [&](Tick t) {
    auto it = std::upper_bound(outings.begin(), outings.end(), t,
                               [](Tick v, const OutingWindow& o) { return v < o.start; });
    if (it == outings.begin()) return false;
    --it;
    return t >= it->start && t < it->end;
  };
  std::size_t next_outing = 0;
  for (const auto& p : positions) {
    while (next_outing < outings.size() && outings[next_outing].start <= p.time) {
      PositionSample gone{};
      gone.time = outings[next_outing].start;
      gone.present = false;
      engine.observe(gone);
      ++next_outing;
    }
    PositionSample s = p;
    if (absent_at(s.time)) s.present = false;
    engine.observe(s);
  }
  engine.finish(horizon);
  return events;
}

}  // namespace homesense
