#include "homesense/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace homesense {

Point WalkSegment::position_at(Tick t) const {
  if (end <= start || t >= end) return to;
  if (t <= start) return from;
  return lerp(from, to, static_cast<double>(t - start) / static_cast<double>(end - start));
}

std::vector<Point> WalkSegment::polyline() const {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(end - start + 1));
  for (Tick t = start; t <= end; ++t) pts.push_back(position_at(t));
  return pts;
}

std::vector<Tick> WalkSegment::timestamps() const {
  std::vector<Tick> ts;
  ts.reserve(static_cast<std::size_t>(end - start + 1));
  for (Tick t = start; t <= end; ++t) ts.push_back(t);
  return ts;
}

WalkSegment plan_walk(Point from, Point to, double speed_cm_s, Tick depart) {
  if (!(speed_cm_s > 0.0)) throw std::invalid_argument("walking speed must be positive");
  WalkSegment w;
  w.from = from;
  w.to = to;
  w.speed_cm_s = speed_cm_s;
  w.start = depart;
  double seconds = distance(from, to) / (speed_cm_s / 100.0);
  w.end = depart + static_cast<Tick>(std::ceil(seconds * kTicksPerSecond - 1e-9));
  return w;
}

Tick piece_start(const TrajectoryPiece& p) {
  return std::visit([](const auto& x) { return x.start; }, p);
}

Tick piece_end(const TrajectoryPiece& p) {
  return std::visit([](const auto& x) { return x.end; }, p);
}

}  // namespace homesense
