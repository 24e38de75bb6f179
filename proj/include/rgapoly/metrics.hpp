#pragma once

#include <span>
#include <vector>

#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"
#include "rgapoly/refine.hpp"

namespace rgapoly {

/// Even-odd scanline fill in the continuous pixel frame: pixel (x, y) is set
/// iff its centre (x + 0.5, y + 0.5) lies strictly inside.
BinaryMask rasterize_polygon(std::span<const Point2> vertices, int width, int height);
BinaryMask rasterize_polygon(const Polygon& polygon, int width, int height);

/// |a and b| / |a or b|; 1 when both are empty. Throws DimensionMismatch.
double iou(const BinaryMask& a, const BinaryMask& b);

struct PolygonScore {
  int component_id = -1;
  bool refined = false;
  int matched_building = -1;  ///< ground-truth component with the largest overlap, -1 if none
  double iou = 0.0;
};

struct BuildingScore {
  int building = 0;
  std::size_t pixels = 0;
  std::size_t predictions = 0;
  double iou = 0.0;
};

struct EvalReport {
  std::vector<PolygonScore> polygons;
  std::vector<BuildingScore> buildings;
  double micro_iou = 0.0;  ///< pooled pixels over the whole canvas
  double macro_iou = 0.0;  ///< mean of per-building IoU
};

/// Scores predicted polygons against a ground-truth mask. Each prediction is
/// assigned to the ground-truth component it overlaps most; a building's IoU
/// uses the union of its assigned predictions.
EvalReport evaluate(std::span<const Polygon> predictions, const BinaryMask& ground_truth);

}  // namespace rgapoly
