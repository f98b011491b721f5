#include "homesense/threshold.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace homesense {

double ThresholdDetector::theta_for(double mu, double sigma, double c, Direction direction) {
  return direction == Direction::Above ? mu + c * sigma : mu - c * sigma;
}

double grid_value(int k) { return static_cast<double>(k - 20) / 20.0; }

std::vector<std::int64_t> RunMonitor::observe(std::int64_t day, bool exceeds) {
  std::vector<std::int64_t> out;
  if (!exceeds) {
    run_start_ = -1;
    run_length_ = 0;
    return out;
  }
  if (run_start_ < 0) run_start_ = day;
  ++run_length_;
  if (run_length_ == min_run_) {
    for (std::int64_t d = run_start_; d <= day; ++d) out.push_back(d);
  } else if (run_length_ > min_run_) {
    out.push_back(day);
  }
  return out;
}

LabelTrack ThresholdDetector::classify(std::span<const double> daily) const {
  LabelTrack t;
  t.unit_seconds = kUnitDay;
  t.length = static_cast<std::int64_t>(daily.size());
  RunMonitor monitor(min_run_days);
  for (std::size_t d = 0; d < daily.size(); ++d)
    for (auto day : monitor.observe(static_cast<std::int64_t>(d), exceeds(daily[d]))) t.append({day, day});
  return t;
}

double f1_score(const LabelTrack& truth, const LabelTrack& pred, const std::vector<char>* exclude) {
  if (truth.length != pred.length) throw std::invalid_argument("track lengths differ");
  auto y = truth.to_dense();
  auto p = pred.to_dense();
  std::int64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    bool pi = p[i] && !(exclude && (*exclude)[i]);
    if (pi && y[i]) ++tp;
    else if (pi) ++fp;
    else if (y[i]) ++fn;
  }
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

ThresholdDetector fit_threshold(std::span<const double> daily, const LabelTrack& labels, Direction direction,
                                const std::vector<char>* exclude, int min_run_days) {
  if (static_cast<std::int64_t>(daily.size()) != labels.length) throw std::invalid_argument("daily series and labels differ in length");
  if (labels.intervals.empty())
    throw std::invalid_argument("no positive days in the training labels; skip this detector");
  const double n = static_cast<double>(daily.size());
  const double mu = std::accumulate(daily.begin(), daily.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : daily) ss += (v - mu) * (v - mu);
  const double sigma = daily.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  ThresholdDetector best;
  double best_f1 = -1.0;
  for (int k = 0; k <= kGridSteps; ++k) {
    ThresholdDetector d;
    d.mu = mu;
    d.sigma = sigma;
    d.c = grid_value(k);
    d.direction = direction;
    d.min_run_days = min_run_days;
    d.theta = ThresholdDetector::theta_for(mu, sigma, d.c, direction);
    double f = f1_score(labels, d.classify(daily), exclude);
    if (f > best_f1) {
      best_f1 = f;
      best = d;
    }
  }
  return best;
}

WeeksScalePrediction detect_weeksscale(std::span<const double> sleep_hours, std::span<const double> outings,
                                       const ThresholdDetector& sleep_detector,
                                       const ThresholdDetector& outing_detector) {
  if (sleep_hours.size() != outings.size()) throw std::invalid_argument("daily series differ in length");
  WeeksScalePrediction out;
  out.semi_bedridden = sleep_detector.classify(sleep_hours);
  LabelTrack house = outing_detector.classify(outings);
  out.housebound.unit_seconds = kUnitDay;
  out.housebound.length = house.length;
  for (const auto& iv : house.intervals) {
    for (std::int64_t d = iv.start; d <= iv.end; ++d)
      if (!out.semi_bedridden.at(d)) out.housebound.append({d, d});
  }
  return out;
}

}  // namespace homesense
