#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "homesense/activity.hpp"
#include "homesense/anomalies.hpp"
#include "homesense/floor_plan.hpp"
#include "homesense/mmse.hpp"
#include "homesense/sensor_engine.hpp"
#include "homesense/walk.hpp"

namespace homesense {

struct MotionParams {
  double burst_min_s = 1.0;  // in-place movement length
  double burst_max_s = 2.0;
  double fall_motion_s = 0.0;  // body movement when falling and when getting up
};

struct SimulationConfig {
  std::uint64_t seed = 1;
  int horizon_days = 3240;
  FloorPlan plan;
  SensorLayout layout;
  std::vector<ActivityTemplate> templates;
  MmseParams mmse;
  AnomalyParams anomalies;
  MotionParams motion;
  double walking_speed_cm_s = kDefaultSpeedCmPerS;
  double door_open_s = 3.0;

  static SimulationConfig defaults();
  // Throws std::invalid_argument listing every problem found.
  void validate() const;
};

struct SimulationResult {
  int horizon_days = 0;
  std::vector<SensorEvent> events;
  std::vector<AnomalyEpisode> episodes;      // sorted by kind then start
  std::vector<ActivityInstance> activities;  // realized, time-ordered
  MmseTrajectory mmse;
  std::vector<std::string> warnings;
  std::size_t event_count = 0;
  std::size_t activation_count = 0;  // ON events

  Tick horizon_ticks() const { return ticks_from_days(horizon_days); }
  std::vector<AnomalyEpisode> episodes_of(AnomalyKind kind) const;
};

// Realized movement plan: trajectory pieces plus the activities and the time-critical
// anomaly episodes as they actually happened.
struct Realization {
  std::vector<TrajectoryPiece> pieces;
  std::vector<ActivityInstance> activities;
  std::vector<AnomalyEpisode> episodes;
};

struct PendingAnomalies {
  std::vector<AnomalyEpisode> wandering;
  std::vector<AnomalyEpisode> fall_walking;
  std::vector<AnomalyEpisode> fall_standing;
};

Realization realize(std::span<const ActivityInstance> schedule, const FloorPlan& plan, const std::string& bed_anchor,
                    double speed_cm_s, const PendingAnomalies& pending, const AnomalyParams& params, Rng& rng);

// Position samples for one piece, fed in time order.
void emit_samples(const TrajectoryPiece& piece, const MotionParams& motion, Rng& rng,
                  const std::function<void(const PositionSample&)>& observe);

SimulationResult simulate(const SimulationConfig& config);
// Streams events to `sink`; the returned result has no stored events.
SimulationResult simulate(const SimulationConfig& config, const EventSink& sink);

}  // namespace homesense
