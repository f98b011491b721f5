#include "homesense/daily.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homesense {

namespace {

constexpr Tick kMinGap = 60 * kTicksPerSecond;

// Pairs consecutive activations of the `anchor` group, rejecting pairs with another motion
// activation strictly inside. Calls `accept(start, end)` for each qualifying pair.
template <class IsAnchor, class Accept>
void scan_intervals(std::span<const SensorEvent> events, const SensorLayout& layout, IsAnchor is_anchor, Accept accept) {
  std::vector<char> motion(layout.size(), 0);
  for (const auto& s : layout.sensors) motion[s.id] = s.is_motion();
  Tick open = -1;
  bool interrupted = false;
  std::size_t i = 0;
  while (i < events.size()) {
    const Tick t = events[i].time;
    std::size_t j = i;
    bool anchor_on = false, other_on = false;
    for (; j < events.size() && events[j].time == t; ++j) {
      const auto& e = events[j];
      if (!e.on || e.sensor_id < 0 || e.sensor_id >= layout.size()) continue;
      if (is_anchor(e.sensor_id)) anchor_on = true;
      else if (motion[e.sensor_id]) other_on = true;
    }
    if (anchor_on) {
      if (open >= 0 && !interrupted && t - open > kMinGap) accept(open, t);
      open = t;
      interrupted = false;
    } else if (other_on && open >= 0) {
      interrupted = true;
    }
    i = j;
  }
}

}  // namespace

std::vector<double> estimate_sleep(std::span<const SensorEvent> events, const SensorLayout& layout, int days) {
  std::vector<double> out(static_cast<std::size_t>(days), 0.0);
  std::vector<char> bed(layout.size(), 0);
  for (int b : layout.bed_sensor_ids) bed.at(b) = 1;
  scan_intervals(events, layout, [&](int s) { return bed[s] != 0; }, [&](Tick a, Tick b) {
    auto day = static_cast<std::size_t>(a / kTicksPerDay);
    if (day < out.size()) out[day] += static_cast<double>(b - a) / (3600.0 * kTicksPerSecond);
  });
  return out;
}

std::vector<double> estimate_outings(std::span<const SensorEvent> events, const SensorLayout& layout, int days) {
  std::vector<double> out(static_cast<std::size_t>(days), 0.0);
  const int door = layout.door_sensor_id;
  scan_intervals(events, layout, [&](int s) { return s == door; }, [&](Tick a, Tick) {
    auto day = static_cast<std::size_t>(a / kTicksPerDay);
    if (day < out.size()) out[day] += 1.0;
  });
  return out;
}

DailySeries estimate_daily(std::span<const SensorEvent> events, const SensorLayout& layout, int days) {
  return {estimate_sleep(events, layout, days), estimate_outings(events, layout, days)};
}

DailySeries daily_ground_truth(std::span<const ActivityInstance> activities, int days) {
  DailySeries d{std::vector<double>(static_cast<std::size_t>(days), 0.0),
                std::vector<double>(static_cast<std::size_t>(days), 0.0)};
  for (const auto& a : activities) {
    auto day = static_cast<std::size_t>(a.start / kTicksPerDay);
    if (day >= d.sleep_hours.size()) continue;
    if (a.is_sleep_segment()) d.sleep_hours[day] += static_cast<double>(a.end - a.start) / (3600.0 * kTicksPerSecond);
    if (a.is_outing()) d.outings[day] += 1.0;
  }
  return d;
}

double mean_absolute_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("series lengths differ");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace homesense
