#include "homesense/forgetting.hpp"

#include <algorithm>
#include <stdexcept>

namespace homesense {

ForgettingExtractor::ForgettingExtractor(const SensorLayout& layout, std::int64_t horizon_seconds, WindowSink sink,
                                         std::int64_t window_seconds)
    : horizon_ticks_(horizon_seconds * kTicksPerSecond),
      window_ticks_(window_seconds * kTicksPerSecond),
      sink_(std::move(sink)),
      is_cost_(layout.size(), 0),
      dist_(layout.size(), std::vector<double>(layout.size(), 0.0)),
      on_(layout.size(), 0) {
  if (window_seconds <= 0) throw std::invalid_argument("window must be positive");
  for (const auto& s : layout.sensors) is_cost_[s.id] = s.is_cost();
  for (int a = 0; a < layout.size(); ++a)
    for (int b = 0; b < layout.size(); ++b) dist_[a][b] = sensor_distance(layout, a, b);
}

// Accounts for the constant ON set over [now_, t).
void ForgettingExtractor::advance(Tick t) {
  t = std::min(t, horizon_ticks_);
  while (now_ < t) {
    Tick window_end = (window_ + 1) * window_ticks_;
    Tick upto = std::min(t, window_end);
    int cost_on = 0;
    double far = 0.0;
    for (int c : on_list_) {
      if (!is_cost_[c]) continue;
      ++cost_on;
      for (int s : on_list_)
        if (s != c) far = std::max(far, dist_[c][s]);
    }
    acc_.on_ticks += cost_on * (upto - now_);
    acc_.max_distance = std::max(acc_.max_distance, far);
    now_ = upto;
    if (now_ == window_end) {
      sink_(window_, acc_);
      acc_ = {};
      ++window_;
    }
  }
}

void ForgettingExtractor::push(const SensorEvent& e) {
  if (e.time < now_) throw std::invalid_argument("events must be sorted by time");
  if (e.sensor_id < 0 || e.sensor_id >= static_cast<int>(on_.size())) throw std::out_of_range("unknown sensor id");
  advance(e.time);
  if (static_cast<bool>(on_[e.sensor_id]) == e.on) return;
  on_[e.sensor_id] = e.on;
  if (e.on) on_list_.push_back(e.sensor_id);
  else on_list_.erase(std::find(on_list_.begin(), on_list_.end(), e.sensor_id));
}

void ForgettingExtractor::finish() {
  advance(horizon_ticks_);
  if (now_ > window_ * window_ticks_) {
    sink_(window_, acc_);
    acc_ = {};
    ++window_;
  }
}

std::vector<ForgettingWindow> forgetting_features(std::span<const SensorEvent> events, const SensorLayout& layout,
                                                  std::int64_t horizon_seconds, std::int64_t window_seconds) {
  std::vector<ForgettingWindow> out;
  ForgettingExtractor x(layout, horizon_seconds, [&](std::int64_t, const ForgettingWindow& w) { out.push_back(w); },
                        window_seconds);
  for (const auto& e : events) x.push(e);
  x.finish();
  return out;
}

}  // namespace homesense
