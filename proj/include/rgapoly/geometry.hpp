#pragma once

#include <cmath>
#include <span>

namespace rgapoly {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  Point2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator*(Point2 a, double s) { return a *= s; }
  friend Point2 operator*(double s, Point2 a) { return a *= s; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

constexpr double kPi = 3.14159265358979323846;

inline double to_radians(double deg) { return deg * kPi / 180.0; }
inline double to_degrees(double rad) { return rad * 180.0 / kPi; }

/// Wraps to [0, 360).
double normalize_degrees(double deg);

/// Smallest absolute difference between two angles, in [0, 180].
double circular_distance(double a, double b);

/// atan2 in degrees, [0, 360). Axis-aligned and diagonal vectors give exact
/// multiples of 45 so that rectilinear contours accumulate without drift.
double direction_degrees(const Point2& v);

/// Unit vector of an angle in degrees, exact at multiples of 90.
Point2 unit_vector(double deg);

/// Shoelace signed area; positive when the walk turns with increasing angle
/// (visually clockwise in y-down image coordinates).
double signed_area(std::span<const Point2> ring);

}  // namespace rgapoly
