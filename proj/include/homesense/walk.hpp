#pragma once

#include <variant>
#include <vector>

#include "homesense/floor_plan.hpp"
#include "homesense/geometry.hpp"
#include "homesense/time.hpp"

namespace homesense {

inline constexpr double kDefaultSpeedCmPerS = 68.75;
inline constexpr double kArrivalTolerance = 0.30;

// Straight-line walk sampled at 10 Hz; the position moves linearly from `from` at `start`
// to `to` at `end`.
struct WalkSegment {
  Point from;
  Point to;
  double speed_cm_s = kDefaultSpeedCmPerS;
  Tick start = 0;
  Tick end = 0;

  double length() const { return distance(from, to); }
  Point position_at(Tick t) const;
  // Polyline points, one per tick from start to end inclusive.
  std::vector<Point> polyline() const;
  std::vector<Tick> timestamps() const;
};

WalkSegment plan_walk(Point from, Point to, double speed_cm_s, Tick depart);

// Stationary span. A fallen hold may start and end with a short body movement (MotionParams::fall_motion_s).
struct Hold {
  Point position;
  Tick start = 0;
  Tick end = 0;
  double body_radius = kUprightRadius;
  double motion_interval_s = 0.0;
  bool fallen = false;
};

// Resident outside the home; the door fires at both ends.
struct Absence {
  Tick start = 0;
  Tick end = 0;
};

using TrajectoryPiece = std::variant<WalkSegment, Hold, Absence>;

Tick piece_start(const TrajectoryPiece& p);
Tick piece_end(const TrajectoryPiece& p);

}  // namespace homesense
