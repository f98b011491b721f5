#include "homesense/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace homesense {

double Rect::distance_to(Point p) const {
  double dx = std::max({x0 - p.x, 0.0, p.x - x1});
  double dy = std::max({y0 - p.y, 0.0, p.y - y1});
  return std::hypot(dx, dy);
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point lerp(Point a, Point b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

bool discs_intersect(Point a, double ra, Point b, double rb) { return distance(a, b) < ra + rb; }

bool disc_intersects_rect(Point c, double r, const Rect& rect) { return rect.distance_to(c) < r; }

bool segment_within(Point a, Point b, Point c, double radius, double& t0, double& t1) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double fx = a.x - c.x, fy = a.y - c.y;
  double qa = dx * dx + dy * dy;
  double qb = 2 * (fx * dx + fy * dy);
  double qc = fx * fx + fy * fy - radius * radius;
  if (qa == 0.0) {
    if (qc > 0) return false;
    t0 = 0.0;
    t1 = 1.0;
    return true;
  }
  double disc = qb * qb - 4 * qa * qc;
  if (disc < 0) return false;
  double sq = std::sqrt(disc);
  double r0 = (-qb - sq) / (2 * qa);
  double r1 = (-qb + sq) / (2 * qa);
  t0 = std::max(r0, 0.0);
  t1 = std::min(r1, 1.0);
  return t0 <= t1;
}

}  // namespace homesense
