#include "homesense/data_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace homesense {

DataMatrix::DataMatrix(int sensors, std::int64_t columns) : columns_(columns), runs_(sensors) {
  if (sensors < 0 || columns < 0) throw std::invalid_argument("negative matrix dimension");
}

bool DataMatrix::at(int sensor, std::int64_t column) const {
  const auto& r = runs_.at(sensor);
  auto it = std::upper_bound(r.begin(), r.end(), column, [](std::int64_t c, const ColumnRun& x) { return c < x.first; });
  if (it == r.begin()) return false;
  --it;
  return column <= it->last;
}

std::int64_t DataMatrix::column_sum(std::int64_t column) const {
  std::int64_t n = 0;
  for (int s = 0; s < sensors(); ++s) n += at(s, column) ? 1 : 0;
  return n;
}

void DataMatrix::add_run(int sensor, ColumnRun run) {
  if (run.first > run.last || run.first < 0 || run.last >= columns_) throw std::out_of_range("column run outside the matrix");
  auto& r = runs_.at(sensor);
  if (!r.empty()) {
    if (run.first < r.back().first) throw std::invalid_argument("column runs must be added in order");
    if (run.first <= r.back().last + 1) {
      r.back().last = std::max(r.back().last, run.last);
      return;
    }
  }
  r.push_back(run);
}

void DataMatrix::for_each_segment(
    const std::function<void(std::int64_t, std::int64_t, std::span<const int>)>& visit) const {
  // Boundary sweep: each run contributes a start at `first` and an end after `last`.
  std::vector<std::size_t> next(runs_.size(), 0);
  std::vector<int> active;
  std::int64_t col = 0;
  auto boundary = [&](int s) -> std::int64_t {
    const auto& r = runs_[s];
    std::size_t i = next[s];
    if (i >= r.size()) return columns_;
    bool on = std::binary_search(active.begin(), active.end(), s);
    return on ? r[i].last + 1 : r[i].first;
  };
  using Item = std::pair<std::int64_t, int>;
  std::vector<Item> heap;
  auto cmp = [](const Item& a, const Item& b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
  for (int s = 0; s < sensors(); ++s) {
    std::int64_t b = boundary(s);
    if (b < columns_) heap.push_back({b, s});
  }
  std::make_heap(heap.begin(), heap.end(), cmp);
  while (col < columns_) {
    std::int64_t upto = heap.empty() ? columns_ : heap.front().first;
    if (upto > col) {
      visit(col, upto - 1, active);
      col = upto;
    }
    while (!heap.empty() && heap.front().first == col) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      int s = heap.back().second;
      heap.pop_back();
      auto pos = std::lower_bound(active.begin(), active.end(), s);
      if (pos != active.end() && *pos == s) {
        active.erase(pos);
        ++next[s];
      } else {
        active.insert(pos, s);
      }
      std::int64_t b = boundary(s);
      if (b < columns_) {
        heap.push_back({b, s});
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    }
  }
}

Binarizer::Binarizer(int sensors, std::int64_t seconds, RunSink sink)
    : seconds_(seconds), sink_(std::move(sink)), on_since_(sensors, -1), pending_(sensors), has_pending_(sensors, 0) {}

void Binarizer::emit(int sensor, ColumnRun run) {
  run.last = std::min(run.last, seconds_ - 1);
  if (run.first > run.last) return;
  if (has_pending_[sensor]) {
    auto& p = pending_[sensor];
    if (run.first <= p.last + 1) {
      p.last = std::max(p.last, run.last);
      return;
    }
    sink_(sensor, p);
  }
  pending_[sensor] = run;
  has_pending_[sensor] = 1;
}

void Binarizer::push(const SensorEvent& e) {
  if (e.sensor_id < 0 || e.sensor_id >= static_cast<int>(on_since_.size()))
    throw std::out_of_range("event sensor id " + std::to_string(e.sensor_id) + " outside the matrix");
  if (e.time < last_time_) throw std::invalid_argument("events must be sorted by time");
  if (e.time > seconds_ * kTicksPerSecond)
    throw std::out_of_range("event at " + std::to_string(e.time) + " ticks lies beyond the horizon");
  last_time_ = e.time;
  Tick& since = on_since_[e.sensor_id];
  if (e.on) {
    if (since < 0) since = e.time;
    return;
  }
  if (since < 0) return;
  // ON over ticks [since, e.time); a same-tick pulse is never sampled ON.
  if (e.time > since) emit(e.sensor_id, {column_of_tick(since), column_of_tick(e.time - 1)});
  since = -1;
}

void Binarizer::finish() {
  for (std::size_t s = 0; s < on_since_.size(); ++s) {
    if (on_since_[s] >= 0) {
      emit(static_cast<int>(s), {column_of_tick(on_since_[s]), seconds_ - 1});
      on_since_[s] = -1;
    }
    if (has_pending_[s]) {
      sink_(static_cast<int>(s), pending_[s]);
      has_pending_[s] = 0;
    }
  }
}

std::size_t Binarizer::open_runs() const {
  return static_cast<std::size_t>(std::count(has_pending_.begin(), has_pending_.end(), 1));
}

DataMatrix binarize(std::span<const SensorEvent> events, int sensors, std::int64_t seconds) {
  DataMatrix m(sensors, seconds);
  Binarizer b(sensors, seconds, [&](int s, ColumnRun r) { m.add_run(s, r); });
  for (const auto& e : events) b.push(e);
  b.finish();
  return m;
}

}  // namespace homesense
