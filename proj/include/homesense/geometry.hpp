#pragma once

namespace homesense {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  Point center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  // Euclidean distance from p to the closed rectangle (0 inside).
  double distance_to(Point p) const;
};

double distance(Point a, Point b);
Point lerp(Point a, Point b, double t);

// Open-disc intersection tests: touching boundaries do not count.
bool discs_intersect(Point a, double ra, Point b, double rb);
bool disc_intersects_rect(Point c, double r, const Rect& rect);

// Parameter range [t0, t1] within [0, 1] where segment a->b lies within `radius` of `c`.
// Returns false if the segment never comes that close.
bool segment_within(Point a, Point b, Point c, double radius, double& t0, double& t1);

}  // namespace homesense
