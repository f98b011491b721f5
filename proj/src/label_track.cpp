#include "homesense/label_track.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "homesense/event_io.hpp"

namespace homesense {

std::int64_t unit_for(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::SemiBedridden:
    case AnomalyKind::Housebound: return kUnitDay;
    case AnomalyKind::Forgetting: return kUnitTwoHours;
    default: return kUnitSecond;
  }
}

std::vector<Interval> label_intervals(std::span<const std::uint8_t> y) {
  std::vector<Interval> out;
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  for (std::int64_t k = 0; k < n;) {
    if (!y[k]) {
      ++k;
      continue;
    }
    std::int64_t s = k;
    while (k < n && y[k]) ++k;
    out.push_back({s, k - 1});
  }
  return out;
}

LabelTrack LabelTrack::from_dense(std::span<const std::uint8_t> y, std::int64_t unit_seconds) {
  LabelTrack t;
  t.unit_seconds = unit_seconds;
  t.length = static_cast<std::int64_t>(y.size());
  t.intervals = label_intervals(y);
  return t;
}

std::vector<std::uint8_t> LabelTrack::to_dense() const {
  std::vector<std::uint8_t> y(static_cast<std::size_t>(length), 0);
  for (const auto& iv : intervals)
    std::fill(y.begin() + iv.start, y.begin() + iv.end + 1, 1);
  return y;
}

bool LabelTrack::at(std::int64_t k) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), k,
                             [](std::int64_t v, const Interval& iv) { return v < iv.start; });
  if (it == intervals.begin()) return false;
  --it;
  return k <= it->end;
}

std::int64_t LabelTrack::ones() const {
  std::int64_t n = 0;
  for (const auto& iv : intervals) n += iv.count();
  return n;
}

void LabelTrack::append(Interval run) {
  if (run.start > run.end) return;
  if (run.start < 0 || run.end >= length) throw std::out_of_range("label run outside the track");
  if (!intervals.empty()) {
    auto& last = intervals.back();
    if (run.start < last.start) throw std::invalid_argument("label runs must be appended in order");
    if (run.start <= last.end + 1) {
      last.end = std::max(last.end, run.end);
      return;
    }
  }
  intervals.push_back(run);
}

LabelTrack summarize_labels(std::span<const AnomalyEpisode> episodes, std::int64_t unit_seconds,
                            std::int64_t horizon_seconds) {
  if (unit_seconds <= 0 || horizon_seconds % unit_seconds != 0)
    throw std::invalid_argument("label unit must divide the horizon");
  LabelTrack t;
  t.unit_seconds = unit_seconds;
  t.length = horizon_seconds / unit_seconds;
  const Tick unit_ticks = unit_seconds * kTicksPerSecond;
  std::vector<Interval> runs;
  for (const auto& e : episodes) {
    if (e.end <= e.start) continue;
    std::int64_t s = e.start / unit_ticks;
    std::int64_t x = (e.end - 1) / unit_ticks;
    s = std::max<std::int64_t>(s, 0);
    x = std::min<std::int64_t>(x, t.length - 1);
    if (s <= x) runs.push_back({s, x});
  }
  std::sort(runs.begin(), runs.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  for (const auto& r : runs) {
    if (!t.intervals.empty() && r.start <= t.intervals.back().end + 1)
      t.intervals.back().end = std::max(t.intervals.back().end, r.end);
    else
      t.intervals.push_back(r);
  }
  return t;
}

LabelTrack denoise(const LabelTrack& y, std::int64_t threshold) {
  if (threshold < 0) throw std::invalid_argument("denoise threshold must be >= 0");
  LabelTrack out;
  out.unit_seconds = y.unit_seconds;
  out.length = y.length;
  for (const auto& iv : y.intervals)
    if (iv.count() >= threshold) out.intervals.push_back(iv);
  return out;
}

void write_label_track(const LabelTrack& y, std::ostream& out) {
  out << "# unit_seconds=" << y.unit_seconds << '\n' << "# length=" << y.length << '\n' << "start,end\n";
  for (const auto& iv : y.intervals) out << iv.start << ',' << iv.end << '\n';
}

LabelTrack read_label_track(std::istream& in) {
  LabelTrack y;
  bool unit = false, length = false;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "start,end") continue;
    try {
      if (line.rfind("# unit_seconds=", 0) == 0) {
        y.unit_seconds = std::stoll(line.substr(15));
        unit = true;
      } else if (line.rfind("# length=", 0) == 0) {
        y.length = std::stoll(line.substr(9));
        length = true;
      } else if (line[0] == '#') {
        continue;
      } else {
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("expected `start,end`");
        y.append({std::stoll(line.substr(0, comma)), std::stoll(line.substr(comma + 1))});
      }
    } catch (const std::exception& e) {
      throw ParseError(n, e.what());
    }
  }
  if (!unit || !length) throw ParseError(n, "label track header needs unit_seconds and length");
  return y;
}

}  // namespace homesense
