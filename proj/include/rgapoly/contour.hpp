#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"

namespace rgapoly {

/// Closed boundary, indexed circularly. Points are in pixel-index coordinates
/// (the centre of pixel (x, y) is the point (x, y)). Stored with positive
/// signed area, which places the interior on the side obtained by rotating
/// the travel direction by +90 degrees.
struct Contour {
  std::vector<Point2> points;
  /// Set when the contour was too short for the requested smoothing window.
  bool smoothing_skipped = false;

  std::size_t size() const noexcept { return points.size(); }
  const Point2& at(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    return points[static_cast<std::size_t>(((i % n) + n) % n)];
  }
};

/// Outer border of a component by Moore-neighbour tracing with Jacob's
/// stopping criterion. Holes are ignored. Throws DegenerateComponent when the
/// border encloses no area (single pixels, one-pixel-wide lines).
Contour trace_contour(const ComponentMask& component);

/// Centred circular moving average over `window` points. Windows larger than
/// the contour leave it unchanged and set smoothing_skipped.
Contour smooth_contour(const Contour& contour, int window);

/// Drops circularly consecutive duplicate points.
Contour remove_repeated_points(Contour contour);

/// CSV with header "index,x,y".
void write_contour_csv(const std::filesystem::path& path, const Contour& contour);

}  // namespace rgapoly
