#include "rgapoly/geometry.hpp"

namespace rgapoly {

double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double circular_distance(double a, double b) {
  const double d = normalize_degrees(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

double direction_degrees(const Point2& v) {
  if (v.y == 0.0 && v.x > 0.0) return 0.0;
  if (v.y == 0.0 && v.x < 0.0) return 180.0;
  if (v.x == 0.0 && v.y > 0.0) return 90.0;
  if (v.x == 0.0 && v.y < 0.0) return 270.0;
  if (std::fabs(v.x) == std::fabs(v.y)) {
    if (v.x > 0.0) return v.y > 0.0 ? 45.0 : 315.0;
    return v.y > 0.0 ? 135.0 : 225.0;
  }
  return normalize_degrees(to_degrees(std::atan2(v.y, v.x)));
}

Point2 unit_vector(double deg) {
  const double n = normalize_degrees(deg);
  if (n == 0.0) return {1.0, 0.0};
  if (n == 90.0) return {0.0, 1.0};
  if (n == 180.0) return {-1.0, 0.0};
  if (n == 270.0) return {0.0, -1.0};
  const double r = to_radians(n);
  return {std::cos(r), std::sin(r)};
}

double signed_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ring[i];
    const Point2& b = ring[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

}  // namespace rgapoly
