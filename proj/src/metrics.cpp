#include "homesense/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace homesense {

namespace {

// Number of intervals in `a` overlapping at least one interval in `b`; both sorted and disjoint.
std::int64_t count_hit(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::int64_t hit = 0;
  std::size_t j = 0;
  for (const auto& iv : a) {
    while (j < b.size() && b[j].end < iv.start) ++j;
    if (j < b.size() && b[j].start <= iv.end) ++hit;
  }
  return hit;
}

std::int64_t overlap_units(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::int64_t total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    std::int64_t s = std::max(a[i].start, b[j].start), e = std::min(a[i].end, b[j].end);
    if (s <= e) total += e - s + 1;
    (a[i].end < b[j].end ? i : j)++;
  }
  return total;
}

}  // namespace

namespace {

void finish(ScoreReport& r) {
  r.raw_precision.reset();
  r.raw_recall.reset();
  r.sensitivity.reset();
  r.interval_precision.reset();
  r.mal.reset();
  r.mal_inclusive.reset();
  if (r.predicted_units > 0) r.raw_precision = static_cast<double>(r.overlap_units) / static_cast<double>(r.predicted_units);
  if (r.true_units > 0) r.raw_recall = static_cast<double>(r.overlap_units) / static_cast<double>(r.true_units);
  if (r.true_intervals > 0) r.sensitivity = static_cast<double>(r.true_hit) / static_cast<double>(r.true_intervals);
  r.far_per_day = static_cast<double>(r.predicted_intervals - r.predicted_correct) / r.days;
  if (r.predicted_intervals > 0) {
    const double n = static_cast<double>(r.predicted_intervals);
    r.interval_precision = static_cast<double>(r.predicted_correct) / n;
    r.mal = static_cast<double>(r.predicted_length_sum) / n;
    r.mal_inclusive = static_cast<double>(r.predicted_length_sum + r.predicted_intervals) / n;
  }
}

}  // namespace

ScoreReport score(const LabelTrack& truth, const LabelTrack& pred_in, double days, std::int64_t denoise_threshold) {
  if (truth.length != pred_in.length || truth.unit_seconds != pred_in.unit_seconds)
    throw std::invalid_argument("truth and prediction differ in length or unit");
  if (days <= 0.0) throw std::invalid_argument("days must be positive");
  const LabelTrack pred = denoise_threshold > 0 ? denoise(pred_in, denoise_threshold) : pred_in;
  const auto& I = truth.intervals;
  const auto& P = pred.intervals;
  ScoreReport r;
  r.denoise_threshold = denoise_threshold;
  r.days = days;
  r.true_intervals = static_cast<std::int64_t>(I.size());
  r.predicted_intervals = static_cast<std::int64_t>(P.size());
  r.true_hit = count_hit(I, P);
  r.predicted_correct = count_hit(P, I);
  r.overlap_units = overlap_units(I, P);
  r.true_units = truth.ones();
  r.predicted_units = pred.ones();
  for (const auto& iv : P) r.predicted_length_sum += iv.end - iv.start;
  finish(r);
  return r;
}

ScoreReport pool(std::span<const ScoreReport> reports) {
  if (reports.empty()) throw std::invalid_argument("nothing to pool");
  ScoreReport r;
  r.denoise_threshold = reports.front().denoise_threshold;
  for (const auto& x : reports) {
    r.true_intervals += x.true_intervals;
    r.predicted_intervals += x.predicted_intervals;
    r.true_hit += x.true_hit;
    r.predicted_correct += x.predicted_correct;
    r.overlap_units += x.overlap_units;
    r.true_units += x.true_units;
    r.predicted_units += x.predicted_units;
    r.predicted_length_sum += x.predicted_length_sum;
    r.days += x.days;
  }
  finish(r);
  return r;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

void write_score_row(std::ostream& out, const std::string& anomaly, const std::string& method, const ScoreReport& r) {
  out << anomaly << ',' << method << ',' << r.denoise_threshold << ',' << format_optional(r.raw_precision) << ','
      << format_optional(r.raw_recall) << ',' << format_optional(r.interval_precision) << ','
      << format_optional(r.sensitivity) << ',' << format_optional(r.far_per_day) << ',' << format_optional(r.mal)
      << ',' << format_optional(r.mal_inclusive) << ',' << r.true_intervals << ',' << r.predicted_intervals << '\n';
}

}  // namespace homesense
