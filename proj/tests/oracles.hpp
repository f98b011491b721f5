#pragma once

// Brute-force reference implementations used to check the streaming code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "homesense/floor_plan.hpp"
#include "homesense/sensor_engine.hpp"
#include "homesense/sequence_model.hpp"
#include "homesense/time.hpp"

namespace oracle {

using homesense::SensorEvent;
using homesense::SensorLayout;
using homesense::Tick;

// Maximal runs of ones as closed 0-based ranges, by a direct scan.
inline std::vector<std::pair<std::int64_t, std::int64_t>> runs(const std::vector<std::uint8_t>& y) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    std::size_t j = i;
    while (j + 1 < y.size() && y[j + 1]) ++j;
    out.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
    i = j;
  }
  return out;
}

struct Scores {
  std::optional<double> sensitivity;
  double far = 0.0;
  std::optional<double> mal;
  std::optional<double> interval_precision;
  std::optional<double> raw_precision;
  std::optional<double> raw_recall;
};

// Pairwise overlap test over every (true, predicted) interval pair.
inline Scores score(const std::vector<std::uint8_t>& truth, const std::vector<std::uint8_t>& pred, double days) {
  auto I = runs(truth), P = runs(pred);
  auto overlaps = [](auto a, auto b) { return a.first <= b.second && b.first <= a.second; };
  Scores s;
  std::int64_t hit = 0, correct = 0, length = 0;
  for (auto a : I) {
    bool any = false;
    for (auto b : P) any = any || overlaps(a, b);
    hit += any;
  }
  for (auto b : P) {
    bool any = false;
    for (auto a : I) any = any || overlaps(a, b);
    correct += any;
    length += b.second - b.first;
  }
  if (!I.empty()) s.sensitivity = static_cast<double>(hit) / static_cast<double>(I.size());
  s.far = static_cast<double>(static_cast<std::int64_t>(P.size()) - correct) / days;
  if (!P.empty()) {
    s.mal = static_cast<double>(length) / static_cast<double>(P.size());
    s.interval_precision = static_cast<double>(correct) / static_cast<double>(P.size());
  }
  std::int64_t tp = 0, np = 0, nt = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    tp += truth[k] && pred[k];
    np += pred[k];
    nt += truth[k];
  }
  if (np > 0) s.raw_precision = static_cast<double>(tp) / static_cast<double>(np);
  if (nt > 0) s.raw_recall = static_cast<double>(tp) / static_cast<double>(nt);
  return s;
}

// Sensor state sampled at every 0.1 s tick, replayed from the raw events.
// visit(tick, on) is called for ticks 0..last_tick with the full state vector.
template <class Visit>
void replay_ticks(const std::vector<SensorEvent>& events, int sensors, Tick last_tick, Visit visit) {
  std::vector<char> on(sensors, 0);
  std::size_t i = 0;
  for (Tick t = 0; t <= last_tick; ++t) {
    while (i < events.size() && events[i].time <= t) {
      on[events[i].sensor_id] = events[i].on;
      ++i;
    }
    visit(t, on);
  }
}

// Dense S x T matrix: column k is 1 for a sensor ON at any tick sampled in (k, k+1] seconds.
inline std::vector<std::vector<char>> binarize(const std::vector<SensorEvent>& events, int sensors,
                                               std::int64_t seconds) {
  std::vector<std::vector<char>> X(sensors, std::vector<char>(seconds, 0));
  replay_ticks(events, sensors, seconds * homesense::kTicksPerSecond, [&](Tick t, const std::vector<char>& on) {
    std::int64_t col = t <= 0 ? 0 : (t - 1) / homesense::kTicksPerSecond;
    if (col >= seconds) return;
    for (int s = 0; s < sensors; ++s)
      if (on[s]) X[s][col] = 1;
  });
  return X;
}

// Per-second NRD replay over the dense matrix. Row r belongs to motion sensor ids[r].
inline std::vector<std::vector<std::int64_t>> nrd(const std::vector<std::vector<char>>& X, const SensorLayout& layout,
                                                  std::int64_t cap) {
  const auto ids = layout.motion_sensor_ids();
  const std::int64_t T = X.empty() ? 0 : static_cast<std::int64_t>(X[0].size());
  std::vector<std::vector<std::int64_t>> out(ids.size(), std::vector<std::int64_t>(T, 0));
  int pointer = -1;
  std::int64_t counter = 0;
  std::vector<char> prev(ids.size(), 0);
  for (std::int64_t j = 0; j < T; ++j) {
    std::vector<char> cur(ids.size(), 0);
    bool any = false;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      cur[r] = X[ids[r]][j];
      any = any || cur[r];
    }
    int fresh = -1;
    for (std::size_t r = 0; r < ids.size() && fresh < 0; ++r)
      if (cur[r] && !prev[r] && static_cast<int>(r) != pointer) fresh = static_cast<int>(r);
    if (fresh >= 0) {
      pointer = fresh;
      counter = 0;
    } else if (pointer >= 0) {
      const bool pressure = layout.at(ids[pointer]).kind == homesense::SensorKind::Pressure;
      if (any && cur[pointer] && !pressure) counter = 0;
      else counter = std::min(counter + 1, cap);
    }
    if (pointer >= 0) out[pointer][j] = counter;
    prev = cur;
  }
  return out;
}

struct Window {
  std::int64_t on_ticks = 0;
  double max_distance = 0.0;
};

// Per-tick replay of the forgetting features over windows of `window_s` seconds.
inline std::vector<Window> forgetting(const std::vector<SensorEvent>& events, const SensorLayout& layout,
                                      std::int64_t horizon_s, std::int64_t window_s) {
  const Tick H = horizon_s * homesense::kTicksPerSecond;
  const Tick W = window_s * homesense::kTicksPerSecond;
  std::vector<Window> out(static_cast<std::size_t>((H + W - 1) / W));
  const int S = layout.size();
  std::vector<double> dist(static_cast<std::size_t>(S) * S);
  for (int a = 0; a < S; ++a)
    for (int b = 0; b < S; ++b) {
      const auto p = layout.at(a).position, q = layout.at(b).position;
      dist[a * S + b] = std::hypot(p.x - q.x, p.y - q.y);
    }
  std::vector<char> on(S, 0);
  std::size_t i = 0;
  for (Tick t = 0; t < H; ++t) {
    while (i < events.size() && events[i].time <= t) {
      on[events[i].sensor_id] = events[i].on;
      ++i;
    }
    auto& w = out[static_cast<std::size_t>(t / W)];
    for (int c = 0; c < S; ++c) {
      if (!on[c] || !layout.at(c).is_cost()) continue;
      ++w.on_ticks;
      for (int s = 0; s < S; ++s) {
        if (s == c || !on[s]) continue;
        w.max_distance = std::max(w.max_distance, dist[c * S + s]);
      }
    }
  }
  return out;
}

// P(state_t = 1 | columns) by summing the joint over all 2^T state paths.
inline std::vector<double> posterior_by_enumeration(const homesense::SequenceModel& m,
                                                    const std::vector<std::vector<int>>& columns) {
  const int T = static_cast<int>(columns.size());
  auto emit = [&](int z, const std::vector<int>& x) {
    double p = 1.0;
    for (int s = 0; s < m.sensors(); ++s) p *= x[s] ? m.B[z][s] : 1.0 - m.B[z][s];
    return p;
  };
  std::vector<double> num(T, 0.0);
  double total = 0.0;
  for (std::uint32_t path = 0; path < (1u << T); ++path) {
    double p = 1.0;
    for (int t = 0; t < T; ++t) {
      const int z = (path >> t) & 1;
      p *= t == 0 ? m.pi[z] : m.A[(path >> (t - 1)) & 1][z];
      p *= emit(z, columns[t]);
    }
    total += p;
    for (int t = 0; t < T; ++t)
      if ((path >> t) & 1) num[t] += p;
  }
  for (auto& v : num) v /= total;
  return num;
}

// Random alternating ON/OFF trace, sorted by (time, sensor), every event strictly inside [0, horizon).
// ON and OFF spans are exponential with the given means in ticks.
inline std::vector<SensorEvent> random_trace(std::mt19937_64& gen, int sensors, std::int64_t horizon_s,
                                             std::size_t max_events, double mean_on_ticks, double mean_off_ticks) {
  std::vector<SensorEvent> out;
  const Tick H = horizon_s * homesense::kTicksPerSecond;
  std::exponential_distribution<double> on_span(1.0 / mean_on_ticks), off_span(1.0 / mean_off_ticks);
  const std::size_t per_sensor = std::max<std::size_t>(2, max_events / static_cast<std::size_t>(sensors));
  for (int s = 0; s < sensors; ++s) {
    Tick t = static_cast<Tick>(off_span(gen));
    bool on = true;
    for (std::size_t k = 0; k < per_sensor && t < H; ++k) {
      out.push_back({t, s, on});
      t += 1 + static_cast<Tick>(on ? on_span(gen) : off_span(gen));
      on = !on;
    }
  }
  std::sort(out.begin(), out.end(), homesense::event_order);
  return out;
}

}  // namespace oracle
