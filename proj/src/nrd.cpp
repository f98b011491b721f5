#include "homesense/nrd.hpp"

#include <algorithm>
#include <stdexcept>

namespace homesense {

std::int64_t NrdMatrix::value(int row, std::int64_t column) const {
  auto it = std::upper_bound(runs.begin(), runs.end(), column,
                             [](std::int64_t c, const NrdRun& r) { return c < r.first; });
  if (it == runs.begin()) return 0;
  --it;
  if (column > it->last() || it->row != row) return 0;
  return it->value_at(column);
}

NrdTracker::NrdTracker(const SensorLayout& layout, RunSink sink, std::int64_t cap)
    : sink_(std::move(sink)), cap_(cap), motion_ids_(layout.motion_sensor_ids()), row_of_(layout.size(), -1) {
  for (std::size_t r = 0; r < motion_ids_.size(); ++r) {
    row_of_[motion_ids_[r]] = static_cast<int>(r);
    pressure_.push_back(layout.at(motion_ids_[r]).kind == SensorKind::Pressure);
  }
}

void NrdTracker::emit(NrdRun run) {
  if (run.length <= 0) return;
  // Split where the counter would pass the cap.
  if (run.slope == 1 && run.c0 + run.length - 1 > cap_) {
    std::int64_t rising = std::max<std::int64_t>(0, cap_ - run.c0 + 1);
    if (rising > 0) emit({run.first, rising, run.row, run.c0, 1});
    emit({run.first + rising, run.length - rising, run.row, cap_, 0});
    return;
  }
  if (has_pending_) {
    auto& p = pending_;
    if (p.row == run.row && p.first + p.length == run.first) {
      if (p.length == 1 && run.c0 == p.c0 + run.slope) p.slope = run.slope;
      bool same_line = (run.length == 1 || run.slope == p.slope) && run.c0 == p.c0 + p.slope * p.length;
      if (same_line) {
        p.length += run.length;
        return;
      }
    }
    sink_(p);
  }
  pending_ = run;
  has_pending_ = true;
}

void NrdTracker::segment(std::int64_t first, std::int64_t last, std::span<const int> active) {
  std::vector<int> rows;
  for (int s : active) {
    if (s >= 0 && s < static_cast<int>(row_of_.size()) && row_of_[s] >= 0) rows.push_back(row_of_[s]);
  }
  std::sort(rows.begin(), rows.end());
  auto contains = [](const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); };

  // First column of the segment may carry new activations.
  if (rows.empty()) {
    if (pointer_ >= 0) counter_ = std::min(counter_ + 1, cap_);
  } else {
    int candidate = -1;
    for (int r : rows) {
      if (!contains(prev_, r) && r != pointer_) {
        candidate = r;
        break;
      }
    }
    if (candidate >= 0) {
      pointer_ = candidate;
      counter_ = 0;
    } else if (pointer_ >= 0 && contains(rows, pointer_) && !pressure_[pointer_]) {
      counter_ = 0;
    } else if (pointer_ >= 0) {
      counter_ = std::min(counter_ + 1, cap_);
    }
  }
  if (pointer_ >= 0) emit({first, 1, pointer_, counter_, 0});

  // Remaining columns repeat the same activity: nothing is newly activated.
  const std::int64_t rest = last - first;
  if (rest > 0 && pointer_ >= 0) {
    bool reset = !rows.empty() && contains(rows, pointer_) && !pressure_[pointer_];
    if (reset) {
      counter_ = 0;
      emit({first + 1, rest, pointer_, 0, 0});
    } else {
      std::int64_t c0 = std::min(counter_ + 1, cap_);
      emit({first + 1, rest, pointer_, c0, c0 >= cap_ ? 0 : 1});
      counter_ = std::min(counter_ + rest, cap_);
    }
  }
  prev_ = std::move(rows);
}

void NrdTracker::finish() {
  if (has_pending_) sink_(pending_);
  has_pending_ = false;
}

NrdMatrix nonresponse_duration(const DataMatrix& matrix, const SensorLayout& layout, std::int64_t cap) {
  if (matrix.sensors() != layout.size()) throw std::invalid_argument("matrix sensor count does not match the layout");
  NrdMatrix out;
  out.columns = matrix.columns();
  NrdTracker tracker(layout, [&](const NrdRun& r) { out.runs.push_back(r); }, cap);
  out.motion_ids = tracker.motion_ids();
  matrix.for_each_segment([&](std::int64_t a, std::int64_t b, std::span<const int> active) { tracker.segment(a, b, active); });
  tracker.finish();
  return out;
}

}  // namespace homesense
