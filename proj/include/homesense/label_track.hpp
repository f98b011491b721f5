#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "homesense/anomalies.hpp"

namespace homesense {

// Closed range [start, end] of 0-based track indices.
struct Interval {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::int64_t count() const { return end - start + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Binary label vector stored as its maximal runs of 1s. Index k covers
// [k * unit, (k + 1) * unit) seconds.
struct LabelTrack {
  std::int64_t unit_seconds = 1;
  std::int64_t length = 0;
  std::vector<Interval> intervals;  // sorted, disjoint, non-adjacent

  static LabelTrack from_dense(std::span<const std::uint8_t> y, std::int64_t unit_seconds = 1);
  std::vector<std::uint8_t> to_dense() const;
  bool at(std::int64_t k) const;
  std::int64_t ones() const;
  // Appends a run at or after the current end, merging with an adjacent last run.
  void append(Interval run);
};

inline constexpr std::int64_t kUnitSecond = 1;
inline constexpr std::int64_t kUnitTwoHours = 7200;
inline constexpr std::int64_t kUnitDay = 86400;

std::int64_t unit_for(AnomalyKind kind);

// Maximal runs of 1s as 0-based closed intervals: [0,1,1,1,0,0,1,1,0] -> {[1,3], [6,7]}.
std::vector<Interval> label_intervals(std::span<const std::uint8_t> y);

// y[k] = 1 iff some half-open episode [start, end) overlaps index k.
LabelTrack summarize_labels(std::span<const AnomalyEpisode> episodes, std::int64_t unit_seconds,
                            std::int64_t horizon_seconds);

// Drops every run shorter than `threshold` units; 0 is the identity.
LabelTrack denoise(const LabelTrack& y, std::int64_t threshold);

void write_label_track(const LabelTrack& y, std::ostream& out);
LabelTrack read_label_track(std::istream& in);

}  // namespace homesense
