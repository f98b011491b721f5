#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homesense/label_track.hpp"

namespace homesense {

enum class Direction { Above, Below };

struct ThresholdDetector {
  double mu = 0.0;
  double sigma = 0.0;
  double c = 0.0;
  double theta = 0.0;
  Direction direction = Direction::Above;
  int min_run_days = 7;

  static double theta_for(double mu, double sigma, double c, Direction direction);
  bool exceeds(double value) const { return direction == Direction::Above ? value > theta : value < theta; }
  // Days lying in a run of at least min_run_days exceeding days.
  LabelTrack classify(std::span<const double> daily) const;
};

inline constexpr double kGridLow = -1.0;
inline constexpr double kGridHigh = 3.0;
inline constexpr int kGridSteps = 80;  // step 0.05
double grid_value(int k);

// Binary F1 between two day tracks; 0 when there are no true or predicted positives.
double f1_score(const LabelTrack& truth, const LabelTrack& pred, const std::vector<char>* exclude = nullptr);

// Sample mean/sd over all days, c by grid search on the full rule's F1 (ties to the smaller c).
// Days flagged in `exclude` are forced to 0 in the prediction before scoring.
ThresholdDetector fit_threshold(std::span<const double> daily, const LabelTrack& labels, Direction direction,
                                const std::vector<char>* exclude = nullptr, int min_run_days = 7);

// Day-by-day monitor: a run's days are emitted retroactively when it reaches the minimum length
// and each further day of the run is emitted as it arrives.
class RunMonitor {
 public:
  explicit RunMonitor(int min_run_days) : min_run_(min_run_days) {}
  // Returns the days newly labeled positive after observing `day`.
  std::vector<std::int64_t> observe(std::int64_t day, bool exceeds);

 private:
  int min_run_;
  std::int64_t run_start_ = -1;
  std::int64_t run_length_ = 0;
};

struct WeeksScalePrediction {
  LabelTrack semi_bedridden;
  LabelTrack housebound;
};

WeeksScalePrediction detect_weeksscale(std::span<const double> sleep_hours, std::span<const double> outings,
                                       const ThresholdDetector& sleep_detector,
                                       const ThresholdDetector& outing_detector);

}  // namespace homesense
