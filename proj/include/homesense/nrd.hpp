#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "homesense/data_matrix.hpp"
#include "homesense/floor_plan.hpp"

namespace homesense {

inline constexpr std::int64_t kNrdCap = 86400;

// Columns [first, first + length) where the pointer row holds the value c0 + slope * i.
// Other rows are 0 there. Columns not covered by any run are all-zero.
struct NrdRun {
  std::int64_t first = 0;
  std::int64_t length = 0;
  int row = 0;
  std::int64_t c0 = 0;
  int slope = 0;

  std::int64_t value_at(std::int64_t column) const { return c0 + slope * (column - first); }
  std::int64_t last() const { return first + length - 1; }
};

struct NrdMatrix {
  std::vector<int> motion_ids;  // row -> sensor id
  std::int64_t columns = 0;
  std::vector<NrdRun> runs;     // time-ordered, disjoint

  int rows() const { return static_cast<int>(motion_ids.size()); }
  std::int64_t value(int row, std::int64_t column) const;
};

// Streaming NRD over constant-activity column segments.
class NrdTracker {
 public:
  using RunSink = std::function<void(const NrdRun&)>;
  NrdTracker(const SensorLayout& layout, RunSink sink, std::int64_t cap = kNrdCap);

  // `active` lists all active sensor ids (any kind), sorted.
  void segment(std::int64_t first, std::int64_t last, std::span<const int> active);
  void finish();

  const std::vector<int>& motion_ids() const { return motion_ids_; }

 private:
  void emit(NrdRun run);

  RunSink sink_;
  std::int64_t cap_;
  std::vector<int> motion_ids_;
  std::vector<int> row_of_;       // sensor id -> row or -1
  std::vector<char> pressure_;    // by row
  std::vector<int> prev_;         // motion rows active in the previous column
  int pointer_ = -1;
  std::int64_t counter_ = 0;
  NrdRun pending_{};
  bool has_pending_ = false;
};

NrdMatrix nonresponse_duration(const DataMatrix& matrix, const SensorLayout& layout, std::int64_t cap = kNrdCap);

}  // namespace homesense
