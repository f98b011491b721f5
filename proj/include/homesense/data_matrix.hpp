#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "homesense/sensor_engine.hpp"
#include "homesense/time.hpp"

namespace homesense {

// Closed range of 0-based columns.
struct ColumnRun {
  std::int64_t first = 0;
  std::int64_t last = 0;
  friend bool operator==(const ColumnRun&, const ColumnRun&) = default;
};

// Per-second S x T binary matrix stored as sorted column runs per sensor. Column k covers
// the seconds (k, k+1]; a sensor is 1 there if it is ON at any 0.1 s sample in that span.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(int sensors, std::int64_t columns);

  int sensors() const { return static_cast<int>(runs_.size()); }
  std::int64_t columns() const { return columns_; }
  const std::vector<ColumnRun>& runs(int sensor) const { return runs_.at(sensor); }
  bool at(int sensor, std::int64_t column) const;
  std::int64_t column_sum(std::int64_t column) const;

  // Appends a run; runs must arrive in column order per sensor, touching runs merge.
  void add_run(int sensor, ColumnRun run);

  // Visits maximal column ranges over which the set of active sensors is constant, in order,
  // covering [0, columns()). `active` is sorted ascending.
  void for_each_segment(const std::function<void(std::int64_t first, std::int64_t last,
                                                 std::span<const int> active)>& visit) const;

 private:
  std::int64_t columns_ = 0;
  std::vector<std::vector<ColumnRun>> runs_;
};

// Streaming binarizer: push events in (time, sensor) order, receive finished runs per sensor.
class Binarizer {
 public:
  using RunSink = std::function<void(int sensor, ColumnRun run)>;
  Binarizer(int sensors, std::int64_t seconds, RunSink sink);

  void push(const SensorEvent& e);
  void finish();

  std::size_t open_runs() const;

 private:
  void emit(int sensor, ColumnRun run);

  std::int64_t seconds_;
  RunSink sink_;
  std::vector<Tick> on_since_;       // -1 when OFF
  std::vector<ColumnRun> pending_;   // last run per sensor, held back for merging
  std::vector<char> has_pending_;
  Tick last_time_ = 0;
};

DataMatrix binarize(std::span<const SensorEvent> events, int sensors, std::int64_t seconds);

}  // namespace homesense
