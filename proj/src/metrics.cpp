#include "rgapoly/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rgapoly {

BinaryMask rasterize_polygon(std::span<const Point2> vertices, int width, int height) {
  BinaryMask mask(width, height, 0);
  const std::size_t n = vertices.size();
  if (n < 3) return mask;
  std::vector<double> xs;
  for (int y = 0; y < height; ++y) {
    const double cy = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % n];
      if ((a.y > cy) == (b.y > cy)) continue;
      xs.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // centres strictly between the crossings
      const int first = std::max(0, static_cast<int>(std::floor(xs[k] - 0.5)) + 1);
      const int last = std::min(width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
      for (int x = first; x <= last; ++x) mask(x, y) = 1;
    }
  }
  return mask;
}

BinaryMask rasterize_polygon(const Polygon& polygon, int width, int height) {
  return rasterize_polygon(polygon.vertices, width, height);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  std::size_t inter = 0, uni = 0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const bool x = va[i] != 0, y = vb[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

EvalReport evaluate(std::span<const Polygon> predictions, const BinaryMask& ground_truth) {
  const int w = ground_truth.width(), h = ground_truth.height();
  const auto buildings = connected_components(ground_truth);
  Grid<int> label(w, h, -1);
  for (std::size_t b = 0; b < buildings.size(); ++b) {
    const auto& c = buildings[b];
    for (int y = c.bbox.y0; y <= c.bbox.y1; ++y)
      for (int x = c.bbox.x0; x <= c.bbox.x1; ++x)
        if (c.contains(x, y)) label(x, y) = static_cast<int>(b);
  }

  EvalReport report;
  std::vector<BinaryMask> assigned(buildings.size(), BinaryMask(w, h, 0));
  std::vector<std::size_t> counts(buildings.size(), 0);
  BinaryMask pooled(w, h, 0);
  for (const Polygon& p : predictions) {
    const BinaryMask raster = rasterize_polygon(p, w, h);
    std::vector<std::size_t> overlap(buildings.size(), 0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!raster(x, y)) continue;
        pooled(x, y) = 1;
        if (label(x, y) >= 0) ++overlap[static_cast<std::size_t>(label(x, y))];
      }
    PolygonScore s;
    s.component_id = p.source_component;
    s.refined = p.refined;
    std::size_t best = 0;
    for (std::size_t b = 0; b < buildings.size(); ++b)
      if (overlap[b] > best) {
        best = overlap[b];
        s.matched_building = static_cast<int>(b);
      }
    if (s.matched_building >= 0) {
      const auto b = static_cast<std::size_t>(s.matched_building);
      s.iou = iou(raster, buildings[b].to_image_mask(w, h));
      for (std::size_t i = 0; i < raster.size(); ++i)
        if (raster.values()[i]) assigned[b].values()[i] = 1;
      ++counts[b];
    }
    report.polygons.push_back(s);
  }

  double sum = 0.0;
  for (std::size_t b = 0; b < buildings.size(); ++b) {
    BuildingScore s;
    s.building = static_cast<int>(b);
    s.pixels = buildings[b].pixel_count;
    s.predictions = counts[b];
    s.iou = iou(assigned[b], buildings[b].to_image_mask(w, h));
    sum += s.iou;
    report.buildings.push_back(s);
  }
  report.macro_iou = buildings.empty() ? (predictions.empty() ? 1.0 : 0.0)
                                       : sum / static_cast<double>(buildings.size());
  BinaryMask gt_bits(w, h, 0);
  for (std::size_t i = 0; i < gt_bits.size(); ++i)
    gt_bits.values()[i] = ground_truth.values()[i] != 0;
  report.micro_iou = iou(pooled, gt_bits);
  return report;
}

}  // namespace rgapoly
