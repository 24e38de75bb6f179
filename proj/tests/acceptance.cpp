// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rgapoly/bors.hpp"
#include "rgapoly/geojson.hpp"
#include "rgapoly/metrics.hpp"
#include "rgapoly/pipeline.hpp"
#include "rgapoly/rga.hpp"
#include "rgapoly/synth.hpp"
#include "support.hpp"

using namespace rgapoly;

namespace {

constexpr double kCornerTol = 2.0;           // px
constexpr double kRectIou = 0.98;
constexpr double kRuntimeLimit = 1.0;        // s
constexpr double kAlphaTol = 2.0;            // deg, mod 90
constexpr double kEdgeTol = 0.5;             // deg
constexpr double kSweepIou = 0.95;
constexpr double kLIou = 0.95;
constexpr double kClosureExactTol = 1e-9;
constexpr double kClosureBlurTol = 15.0;
constexpr double kIouGapLimit = 0.05;
constexpr double kConciseness = 0.10;

const double kSweep[] = {10.0, 30.0, 45.0, 60.0, 80.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SceneSpec make_scene(int size, std::vector<std::vector<Point2>> shapes, double radius, double blur,
                     double noise = 0.0, std::uint64_t seed = 1) {
  SceneSpec s;
  s.width = s.height = size;
  s.shapes = std::move(shapes);
  s.corner_round_radius = radius;
  s.blur_sigma = blur;
  s.noise_sigma = noise;
  s.seed = seed;
  return s;
}

const std::vector<Point2> kRect = {{34, 44}, {94, 44}, {94, 84}, {34, 84}};

std::vector<Point2> rect_rotated(double deg) { return testing_support::rotated_rect(64, 64, 60, 40, deg); }

double polygon_iou(const Polygon& p, const BinaryMask& gt) {
  return iou(rasterize_polygon(p, gt.width(), gt.height()), gt);
}

double max_corner_error(const Polygon& p, const std::vector<Point2>& gt) {
  double worst = 0;
  for (const Point2& c : gt) {
    double best = 1e9;
    for (const Point2& v : p.vertices) best = std::min(best, distance(v, c));
    worst = std::max(worst, best);
  }
  return worst;
}

// Refined polygons collected for criterion 5.
struct Refined {
  Polygon polygon;
  std::vector<double> structure;
};
std::vector<Refined> g_refined;

void remember(const PolygonizeResult& r) {
  for (std::size_t i = 0; i < r.polygons.size(); ++i)
    if (r.polygons[i].refined) g_refined.push_back({r.polygons[i], r.components[i].structure_angles});
}

Outcome rectangle_recovery() {
  const auto scene = synth_probability_map(make_scene(128, {kRect}, 4, 2));
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = polygonize(scene.map, PipelineConfig{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  remember(r);
  if (r.polygons.size() != 1) return {false, std::to_string(r.polygons.size()) + " polygons"};
  const Polygon& p = r.polygons[0];
  const double err = max_corner_error(p, kRect);
  const double q = polygon_iou(p, scene.ground_truth);
  const bool ok = p.refined && p.vertices.size() == 4 && err <= kCornerTol && q >= kRectIou &&
                  secs < kRuntimeLimit;
  return {ok, "refined=" + std::to_string(p.refined) + " vertices=" + std::to_string(p.vertices.size()) +
                  fmt(" corner_err=%.3f", err) + fmt(" iou=%.4f", q) + fmt(" time=%.3fs", secs)};
}

Outcome rotation_sweep() {
  bool ok = true;
  std::string detail;
  for (double deg : kSweep) {
    const auto scene = synth_probability_map(make_scene(128, {rect_rotated(deg)}, 4, 2));
    const auto r = polygonize(scene.map, PipelineConfig{});
    remember(r);
    if (r.polygons.size() != 1) {
      ok = false;
      detail += fmt(" [%g: ", deg) + std::to_string(r.polygons.size()) + " polygons]";
      continue;
    }
    const Polygon& p = r.polygons[0];
    const auto& abs = r.components[0].structure_angles;
    const double alpha_err = std::fabs(std::remainder(abs[0] - deg, 90.0));
    const double edge_dev = max_structure_deviation(p, abs);
    const double q = polygon_iou(p, scene.ground_truth);
    const bool good = p.refined && p.vertices.size() == 4 && alpha_err <= kAlphaTol &&
                      edge_dev <= kEdgeTol && q >= kSweepIou;
    ok = ok && good;
    detail += fmt(" [%g:", deg) + " v=" + std::to_string(p.vertices.size()) +
              fmt(" alpha_err=%.2f", alpha_err) + fmt(" edge_dev=%.3f", edge_dev) + fmt(" iou=%.4f]", q);
  }
  return {ok, detail};
}

int reflex_corners(const std::vector<Point2>& v) {
  const double orientation = signed_area(v) > 0 ? 1.0 : -1.0;
  int reflex = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2 a = v[(k + v.size() - 1) % v.size()], b = v[k], c = v[(k + 1) % v.size()];
    if (cross(b - a, c - b) * orientation < 0) ++reflex;
  }
  return reflex;
}

Outcome l_shape() {
  const std::vector<Point2> gt = {{30, 30}, {90, 30}, {90, 60}, {60, 60}, {60, 100}, {30, 100}};
  const auto scene = synth_probability_map(make_scene(128, {gt}, 3, 1.5));
  const auto r = polygonize(scene.map, PipelineConfig{});
  remember(r);
  if (r.polygons.size() != 1) return {false, std::to_string(r.polygons.size()) + " polygons"};
  const Polygon& p = r.polygons[0];
  const int reflex = reflex_corners(p.vertices);
  const double q = polygon_iou(p, scene.ground_truth);
  const bool ok = p.refined && p.vertices.size() == 6 && reflex == 1 && q >= kLIou;
  return {ok, "vertices=" + std::to_string(p.vertices.size()) + " reflex=" + std::to_string(reflex) +
                  fmt(" iou=%.4f", q)};
}

double max_corner_deviation_from_right_angle(const std::vector<Point2>& v) {
  double worst = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2 a = v[(k + v.size() - 1) % v.size()], b = v[k], c = v[(k + 1) % v.size()];
    const double turn = std::fabs(circular_distance(direction_degrees(b - a), direction_degrees(c - b)));
    worst = std::max(worst, std::fabs(turn - 90.0));
  }
  return worst;
}

Outcome step_bridge() {
  const std::vector<Point2> gt = {{30, 40}, {64, 40}, {64, 46}, {100, 46}, {100, 90}, {30, 90}};
  const auto scene = synth_probability_map(make_scene(128, {gt}, 3, 1.5));
  const auto r = polygonize(scene.map, PipelineConfig{});
  remember(r);
  if (r.polygons.size() != 1) return {false, std::to_string(r.polygons.size()) + " polygons"};
  const Polygon& p = r.polygons[0];
  const std::size_t bridges = r.components[0].bridges;
  const double dev = max_corner_deviation_from_right_angle(p.vertices);
  const double err = max_corner_error(p, gt);
  const bool ok = p.refined && bridges >= 1 && p.vertices.size() == 6 && dev <= kEdgeTol;
  return {ok, "bridges=" + std::to_string(bridges) + " vertices=" + std::to_string(p.vertices.size()) +
                  fmt(" max_right_angle_dev=%.3f", dev) + fmt(" corner_err=%.3f", err)};
}

Outcome energy_zero() {
  if (g_refined.empty()) return {false, "no refined polygons from criteria 1-4"};
  double worst = 0;
  for (const Refined& r : g_refined) worst = std::max(worst, max_structure_deviation(r.polygon, r.structure));
  return {worst <= kEdgeTol, std::to_string(g_refined.size()) + " polygons" + fmt(" max_edge_dev=%.4f", worst)};
}

Outcome chamfer_retention() {
  // 60x40 rectangle with a 14 px 45-degree cut at the lower-right corner
  const std::vector<Point2> chamfered = {{34, 44}, {94, 44}, {94, 70}, {80, 84}, {34, 84}};
  PipelineConfig cfg;
  cfg.edge_tau = 0.1;
  const auto a = polygonize(synth_probability_map(make_scene(128, {chamfered}, 0, 1)).map, cfg);
  const auto b = polygonize(synth_probability_map(make_scene(128, {kRect}, 6, 1)).map, cfg);
  const std::size_t va = a.polygons.size() == 1 ? a.polygons[0].vertices.size() : 0;
  const std::size_t vb = b.polygons.size() == 1 ? b.polygons[0].vertices.size() : 0;
  const bool ra = va && a.polygons[0].refined, rb = vb && b.polygons[0].refined;
  return {ra && va == 5 && rb && vb == 4,
          "genuine chamfer: vertices=" + std::to_string(va) + " (want 5); rounded corner: vertices=" +
              std::to_string(vb) + " (want 4)"};
}

// Random polyomino on a 7x7 grid of 12 px cells, no holes, no diagonal-only contacts.
std::vector<Point2> random_rectilinear(std::mt19937_64& rng) {
  constexpr int G = 7;
  for (;;) {
    std::vector<int> cell(G * G, 0);
    auto at = [&](int x, int y) -> int { return x < 0 || y < 0 || x >= G || y >= G ? 0 : cell[y * G + x]; };
    std::uniform_int_distribution<int> size_dist(2, 16);
    const int target = size_dist(rng);
    cell[3 * G + 3] = 1;
    for (int n = 1; n < target;) {
      std::vector<int> frontier;
      for (int y = 0; y < G; ++y)
        for (int x = 0; x < G; ++x)
          if (!at(x, y) && (at(x - 1, y) || at(x + 1, y) || at(x, y - 1) || at(x, y + 1))) frontier.push_back(y * G + x);
      cell[static_cast<std::size_t>(frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)])] = 1;
      ++n;
    }
    // fill holes: empty cells not 4-reachable from outside
    std::vector<int> outside((G + 2) * (G + 2), 0);
    std::vector<std::pair<int, int>> stack{{-1, -1}};
    outside[0] = 1;
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int nx = x + dx, ny = y + dy;
        if (nx < -1 || ny < -1 || nx > G || ny > G) continue;
        int& o = outside[static_cast<std::size_t>((ny + 1) * (G + 2) + nx + 1)];
        if (o || at(nx, ny)) continue;
        o = 1;
        stack.push_back({nx, ny});
      }
    }
    for (int y = 0; y < G; ++y)
      for (int x = 0; x < G; ++x)
        if (!outside[static_cast<std::size_t>((y + 1) * (G + 2) + x + 1)]) cell[y * G + x] = 1;
    bool diagonal = false;
    for (int y = -1; y < G; ++y)
      for (int x = -1; x < G; ++x) {
        const int a = at(x, y), b = at(x + 1, y), c = at(x, y + 1), d = at(x + 1, y + 1);
        if ((a && d && !b && !c) || (b && c && !a && !d)) diagonal = true;
      }
    if (diagonal) continue;

    // Directed cell-boundary edges with the interior on the +90 side.
    std::vector<std::pair<Point2, Point2>> edges;
    for (int y = 0; y < G; ++y)
      for (int x = 0; x < G; ++x) {
        if (!at(x, y)) continue;
        const double X = x, Y = y;
        if (!at(x, y - 1)) edges.push_back({{X, Y}, {X + 1, Y}});
        if (!at(x + 1, y)) edges.push_back({{X + 1, Y}, {X + 1, Y + 1}});
        if (!at(x, y + 1)) edges.push_back({{X + 1, Y + 1}, {X, Y + 1}});
        if (!at(x - 1, y)) edges.push_back({{X, Y + 1}, {X, Y}});
      }
    std::vector<Point2> ring{edges[0].first};
    Point2 cur = edges[0].second;
    while (!(cur == ring.front())) {
      ring.push_back(cur);
      for (const auto& e : edges)
        if (e.first == cur) {
          cur = e.second;
          break;
        }
    }
    std::vector<Point2> corners;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Point2 a = ring[(k + ring.size() - 1) % ring.size()], b = ring[k], c = ring[(k + 1) % ring.size()];
      if (cross(b - a, c - b) != 0) corners.push_back(b * 12.0 + Point2{10, 10});
    }
    return corners;
  }
}

Outcome rga_closure() {
  std::mt19937_64 rng(20240601);
  double worst_exact = 0, worst_blur = 0;
  int blur_failures = 0;
  for (int k = 0; k < 200; ++k) {
    const auto corners = random_rectilinear(rng);
    // staircase level: unit lattice steps with every corner cut at the half step
    const Contour lattice = testing_support::lattice_path(corners);
    Contour cut;
    for (std::size_t i = 0; i < lattice.size(); ++i)
      cut.points.push_back((lattice.points[i] + lattice.points[(i + 1) % lattice.size()]) * 0.5);
    const auto sig = rga_transform(tangent_samples(cut), 1e9);
    worst_exact = std::max(worst_exact, std::fabs(sig.closure - 360.0));

    const auto scene = synth_probability_map(make_scene(104, {corners}, 0, 1.5));
    const auto comps = connected_components(threshold_mask(scene.map));
    if (comps.size() != 1) {
      ++blur_failures;
      continue;
    }
    const Contour smoothed = remove_repeated_points(smooth_contour(trace_contour(comps[0]), 11));
    const auto blurred = rga_transform(tangent_samples(smoothed, &comps[0]), 1e9);
    const double dev = std::fabs(blurred.closure - 360.0);
    worst_blur = std::max(worst_blur, dev);
    if (dev > kClosureBlurTol) ++blur_failures;
  }
  bool range_ok = true;
  for (int i = 0; i < 720 && range_ok; ++i)
    for (int j = 0; j < 720; ++j) {
      const double a = i * 0.5, b = j * 0.5, d = angle_diff(a, b);
      const double m = (a - b - d) / 180.0;
      if (d < -90.0 || d >= 90.0 || m != std::round(m)) {
        range_ok = false;
        break;
      }
    }
  return {worst_exact <= kClosureExactTol && blur_failures == 0 && range_ok,
          fmt("staircase max |closure-360|=%.3g", worst_exact) + fmt(" blurred max=%.3f", worst_blur) +
              " blurred failures=" + std::to_string(blur_failures) +
              " angle_diff grid=" + (range_ok ? "ok" : "violated")};
}

Outcome mle_oracle() {
  std::mt19937_64 rng(777);
  std::gamma_distribution<double> g(0.3, 1.0);
  const BorSet set = orthogonal_bor_set();
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    AngleHistogram h;
    double total = 0;
    for (double& b : h.bins) total += (b = g(rng));
    for (double& b : h.bins) b /= total;
    // independent scan
    std::vector<double> score(360);
    for (int a = 0; a < 360; ++a)
      score[static_cast<std::size_t>(a)] = h.bins[static_cast<std::size_t>(a)] + h.bins[static_cast<std::size_t>((a + 90) % 360)] +
                                          h.bins[static_cast<std::size_t>((a + 180) % 360)] + h.bins[static_cast<std::size_t>((a + 270) % 360)];
    const double top = *std::max_element(score.begin(), score.end());
    int want = 0;
    while (score[static_cast<std::size_t>(want)] < top - 1e-12) ++want;
    const auto got = estimate_initial_angle(h, set);
    if (got.alpha != want || got.likelihood != score[static_cast<std::size_t>(want)]) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 100 histograms"};
}

Outcome determinism() {
  const auto scene = synth_probability_map(make_scene(128, {kRect}, 4, 2));
  const std::string a = to_geojson(polygonize(scene.map, PipelineConfig{}).polygons);
  const auto scene2 = synth_probability_map(make_scene(128, {kRect}, 4, 2));
  const std::string b = to_geojson(polygonize(scene2.map, PipelineConfig{}).polygons);
  return {a == b, std::to_string(a.size()) + " bytes, identical=" + (a == b ? "yes" : "no")};
}

Outcome iou_sanity() {
  double sum_refined = 0, sum_raw = 0, worst_ratio = 0;
  int n = 0;
  bool ok = true;
  for (double deg : kSweep) {
    const auto scene = synth_probability_map(make_scene(128, {rect_rotated(deg)}, 4, 2, 0.05, 1000 + n));
    const auto r = polygonize(scene.map, PipelineConfig{});
    sum_raw += iou(threshold_mask(scene.map), scene.ground_truth);
    double best = 0;
    for (std::size_t i = 0; i < r.polygons.size(); ++i) {
      const double q = polygon_iou(r.polygons[i], scene.ground_truth);
      if (q < best) continue;
      best = q;
      const double ratio = static_cast<double>(r.polygons[i].vertices.size()) /
                           static_cast<double>(std::max<std::size_t>(1, r.components[i].contour_points));
      if (!r.polygons[i].refined) ok = false;
      worst_ratio = std::max(worst_ratio, ratio);
    }
    sum_refined += best;
    ++n;
  }
  const double refined = sum_refined / n, raw = sum_raw / n;
  const double gap = std::fabs(refined - raw);
  ok = ok && gap <= kIouGapLimit && worst_ratio <= kConciseness;
  return {ok, fmt("mean refined iou=%.4f", refined) + fmt(" raw iou=%.4f", raw) + fmt(" gap=%.4f", gap) +
                  fmt(" max vertices/contour points=%.4f", worst_ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rectangle recovery", rectangle_recovery},
      {"rotation sweep", rotation_sweep},
      {"L-shape recovery", l_shape},
      {"step-shape parallel bridge", step_bridge},
      {"energy zero on refined edges", energy_zero},
      {"trusted chamfer retention", chamfer_retention},
      {"RGA closure properties", rga_closure},
      {"MLE oracle equivalence", mle_oracle},
      {"determinism", determinism},
      {"IoU comparison and conciseness", iou_sanity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
