#include <doctest.h>

#include <random>
#include <set>

#include "rgapoly/contour.hpp"
#include "support.hpp"

using namespace rgapoly;
using testing_support::filled_rect;
using testing_support::only_component;

namespace {

bool is_border_pixel(const BinaryMask& m, int x, int y) {
  if (!m.in_bounds(x, y) || !m(x, y)) return false;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if (!m.in_bounds(x + dx, y + dy) || !m(x + dx, y + dy)) return true;
  return false;
}

Point2 centroid(const Contour& c) {
  Point2 s;
  for (const Point2& p : c.points) s += p;
  return s * (1.0 / static_cast<double>(c.size()));
}

}  // namespace

TEST_CASE("3x3 square traces its 8 border pixels") {
  const auto comp = only_component(filled_rect(7, 7, 2, 2, 4, 4));
  const Contour c = trace_contour(comp);
  REQUIRE(c.size() == 8);
  std::set<std::pair<int, int>> pts;
  for (const Point2& p : c.points) pts.insert({static_cast<int>(p.x), static_cast<int>(p.y)});
  const std::set<std::pair<int, int>> ring = {{2, 2}, {3, 2}, {4, 2}, {4, 3},
                                              {4, 4}, {3, 4}, {2, 4}, {2, 3}};
  CHECK(pts == ring);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point2 d = c.at(static_cast<std::ptrdiff_t>(i) + 1) - c.at(static_cast<std::ptrdiff_t>(i));
    CHECK(std::max(std::fabs(d.x), std::fabs(d.y)) == 1.0);
  }
  CHECK(signed_area(c.points) > 0.0);
}

TEST_CASE("lines and single pixels are degenerate") {
  for (const BinaryMask& m : {filled_rect(9, 3, 2, 1, 6, 1), filled_rect(3, 9, 1, 2, 1, 6),
                              filled_rect(3, 3, 1, 1, 1, 1)}) {
    try {
      trace_contour(only_component(m));
      FAIL("expected DegenerateComponent");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateComponent);
    }
  }
}

TEST_CASE("holes do not change the outer contour") {
  const BinaryMask solid = filled_rect(12, 12, 2, 2, 9, 9);
  BinaryMask holed = solid;
  for (int y = 4; y <= 7; ++y)
    for (int x = 4; x <= 7; ++x) holed(x, y) = 0;
  CHECK(trace_contour(only_component(solid)).points == trace_contour(only_component(holed)).points);
}

TEST_CASE("traced points lie on border pixels of random blobs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> pos(2, 17), size(2, 6);
  for (int trial = 0; trial < 40; ++trial) {
    BinaryMask m(26, 26, 0);
    for (int k = 0; k < 4; ++k) {
      const int x = pos(rng), y = pos(rng), w = size(rng), h = size(rng);
      for (int yy = y; yy < y + h; ++yy)
        for (int xx = x; xx < x + w; ++xx) m(xx, yy) = 1;
    }
    for (const auto& comp : connected_components(m)) {
      Contour c;
      try {
        c = trace_contour(comp);
      } catch (const Error&) {
        continue;
      }
      CHECK(signed_area(c.points) > 0.0);
      for (const Point2& p : c.points)
        CHECK(is_border_pixel(m, static_cast<int>(p.x), static_cast<int>(p.y)));
    }
  }
}

TEST_CASE("window 1 is the identity; even windows are rejected") {
  const Contour c = trace_contour(only_component(filled_rect(20, 20, 3, 4, 12, 9)));
  CHECK(smooth_contour(c, 1).points == c.points);
  CHECK_THROWS_AS(smooth_contour(c, 4), Error);
}

TEST_CASE("8-point unit ring with window 3") {
  Contour c;
  c.points = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  const Contour s = smooth_contour(c, 3);
  REQUIRE(s.size() == 8);
  // corner (0,0): mean of (0,1), (0,0), (1,0)
  CHECK(s.points[0].x == doctest::Approx(1.0 / 3));
  CHECK(s.points[0].y == doctest::Approx(1.0 / 3));
  // edge midpoint (1,0): mean of (0,0), (1,0), (2,0)
  CHECK(s.points[1].x == doctest::Approx(1.0));
  CHECK(s.points[1].y == doctest::Approx(0.0));
  CHECK(s.points[2].x == doctest::Approx(5.0 / 3));
  CHECK(s.points[2].y == doctest::Approx(1.0 / 3));
}

TEST_CASE("rectangle smoothing keeps edge midpoints and pulls corners in") {
  const Contour c = trace_contour(only_component(filled_rect(30, 30, 5, 5, 20, 14)));
  const Contour s = smooth_contour(c, 3);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Point2& p = c.points[i];
    const bool corner = (p.x == 5 || p.x == 20) && (p.y == 5 || p.y == 14);
    if (corner) {
      CHECK(s.points[i].x > 5.0);
      CHECK(s.points[i].x < 20.0);
      CHECK(s.points[i].y > 5.0);
      CHECK(s.points[i].y < 14.0);
    } else if ((p.x > 6 && p.x < 19) || (p.y > 6 && p.y < 13)) {
      CHECK(s.points[i] == p);
    }
  }
}

TEST_CASE("smoothing commutes with translation and keeps the centroid") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5, 5);
  Contour c;
  for (int i = 0; i < 40; ++i) c.points.push_back({u(rng), u(rng)});
  const Point2 v{3.25, -7.5};
  Contour moved = c;
  for (Point2& p : moved.points) p += v;
  for (int w : {3, 5, 11}) {
    const Contour a = smooth_contour(c, w);
    const Contour b = smooth_contour(moved, w);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(b.points[i].x == doctest::Approx(a.points[i].x + v.x));
      CHECK(b.points[i].y == doctest::Approx(a.points[i].y + v.y));
    }
    CHECK(centroid(a).x == doctest::Approx(centroid(c).x));
    CHECK(centroid(a).y == doctest::Approx(centroid(c).y));
  }
}

TEST_CASE("short contours pass through flagged") {
  Contour c;
  c.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Contour s = smooth_contour(c, 11);
  CHECK(s.smoothing_skipped);
  CHECK(s.points == c.points);
}
