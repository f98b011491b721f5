#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "homesense/label_track.hpp"

namespace homesense {

// Unset fields are not applicable (empty truth or empty prediction).
struct ScoreReport {
  std::optional<double> raw_precision;
  std::optional<double> raw_recall;
  std::optional<double> interval_precision;
  std::optional<double> sensitivity;
  double far_per_day = 0.0;
  std::optional<double> mal;            // mean of (end - start) over predicted intervals
  std::optional<double> mal_inclusive;  // mean of (end - start + 1)
  std::int64_t denoise_threshold = 0;
  std::int64_t true_intervals = 0;
  std::int64_t predicted_intervals = 0;
  // raw counts, kept so reports from several runs can be pooled
  std::int64_t true_hit = 0;
  std::int64_t predicted_correct = 0;
  std::int64_t overlap_units = 0;
  std::int64_t true_units = 0;
  std::int64_t predicted_units = 0;
  std::int64_t predicted_length_sum = 0;  // sum of (end - start)
  double days = 0.0;
};

// Applies `denoise_threshold` to `pred` before scoring; 0 scores it as given.
ScoreReport score(const LabelTrack& truth, const LabelTrack& pred, double days, std::int64_t denoise_threshold = 0);

// Metrics of the union of independent runs, computed from their raw counts.
ScoreReport pool(std::span<const ScoreReport> reports);

inline constexpr const char* kScoreHeader =
    "anomaly,method,denoise_threshold,raw_precision,raw_recall,interval_precision,sensitivity,far_per_day,"
    "mal,mal_inclusive,true_intervals,predicted_intervals";

std::string format_optional(const std::optional<double>& v);
void write_score_row(std::ostream& out, const std::string& anomaly, const std::string& method, const ScoreReport& r);

}  // namespace homesense
