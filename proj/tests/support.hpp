#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rgapoly/contour.hpp"
#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"
#include "rgapoly/rga.hpp"

namespace testing_support {

using rgapoly::BinaryMask;
using rgapoly::Point2;

inline BinaryMask filled_rect(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h, 0);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) m(x, y) = 1;
  return m;
}

inline rgapoly::ComponentMask only_component(const BinaryMask& m) {
  auto comps = rgapoly::connected_components(m);
  if (comps.size() != 1) throw std::runtime_error("expected one component");
  return comps.front();
}

// Corners of a w x h rectangle centred at (cx, cy), turned by deg.
inline std::vector<Point2> rotated_rect(double cx, double cy, double w, double h, double deg) {
  const double c = std::cos(deg * M_PI / 180.0), s = std::sin(deg * M_PI / 180.0);
  std::vector<Point2> out;
  for (auto [u, v] : {std::pair{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}})
    out.push_back({cx + u * c - v * s, cy + u * s + v * c});
  return out;
}

// Crossing-number point-in-polygon, written out independently of the library.
inline bool point_in_polygon(const std::vector<Point2>& poly, double px, double py) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > py) != (b.y > py)) {
      const double xc = (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x;
      if (px < xc) in = !in;
    }
  }
  return in;
}

inline BinaryMask brute_force_raster(const std::vector<Point2>& poly, int w, int h) {
  BinaryMask m(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m(x, y) = point_in_polygon(poly, x + 0.5, y + 0.5);
  return m;
}

inline rgapoly::ContourAngleSignal signal_of(const rgapoly::Contour& c) {
  return rgapoly::rga_transform(rgapoly::tangent_samples(c));
}

// Closed path through integer lattice points, densified to unit steps.
inline rgapoly::Contour lattice_path(const std::vector<Point2>& corners) {
  rgapoly::Contour c;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point2 a = corners[i];
    const Point2 b = corners[(i + 1) % corners.size()];
    const int steps = static_cast<int>(std::lround(std::max(std::fabs(b.x - a.x), std::fabs(b.y - a.y))));
    for (int k = 0; k < steps; ++k) c.points.push_back(a + (b - a) * (static_cast<double>(k) / steps));
  }
  return c;
}

}  // namespace testing_support
