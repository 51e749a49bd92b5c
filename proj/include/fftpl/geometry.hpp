#pragma once

#include <algorithm>
#include <cmath>

namespace fftpl {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double lx = 0.0;
  double ly = 0.0;
  double hx = 0.0;
  double hy = 0.0;

  double width() const { return hx - lx; }
  double height() const { return hy - ly; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (lx + hx), 0.5 * (ly + hy)}; }

  bool contains(const Rect& r) const {
    return r.lx >= lx && r.hx <= hx && r.ly >= ly && r.hy <= hy;
  }
};

inline double overlap_1d(double alo, double ahi, double blo, double bhi) {
  return std::max(0.0, std::min(ahi, bhi) - std::max(alo, blo));
}

inline double overlap_area(const Rect& a, const Rect& b) {
  return overlap_1d(a.lx, a.hx, b.lx, b.hx) * overlap_1d(a.ly, a.hy, b.ly, b.hy);
}

inline Rect centered_rect(Point c, double w, double h) {
  return {c.x - 0.5 * w, c.y - 0.5 * h, c.x + 0.5 * w, c.y + 0.5 * h};
}

}  // namespace fftpl
