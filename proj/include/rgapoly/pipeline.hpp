#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rgapoly/bors.hpp"
#include "rgapoly/raster.hpp"
#include "rgapoly/refine.hpp"

namespace rgapoly {

enum class BorderPolicy { SkipTouching, Keep };

struct PipelineConfig {
  double threshold = 0.5;
  int smoothing_window = 11;
  int median_window = 11;
  double edge_tau = 0.1;
  std::vector<BorSet> bors_bank = {orthogonal_bor_set()};
  RefineParams refine = default_refine_params();
  std::size_t min_component_px = 16;
  BorderPolicy border_policy = BorderPolicy::SkipTouching;
  double closure_tolerance = kClosureTolerance;
  unsigned jobs = 1;

  static RefineParams default_refine_params() {
    RefineParams p;
    p.outward_bias = true;
    return p;
  }
};

/// Throws InvalidConfig when a field is outside its domain.
void validate(const PipelineConfig& config);

/// Overlays the keys present in a JSON object onto `config`. Keys:
/// threshold, wa, wm, tau, bors (list of "a,b,c" strings or integer lists),
/// keep_border, min_area, jobs, min_run, structure_tolerance,
/// parallel_epsilon, probe_radius, collinear_tolerance. Unknown keys and
/// wrong types throw InvalidConfig.
void apply_config_json(PipelineConfig& config, std::string_view json_text);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

struct ComponentReport {
  int component_id = 0;
  std::size_t pixel_count = 0;
  std::size_t contour_points = 0;
  double base_orientation = 0.0;
  int alpha_hat = 0;
  std::vector<int> bor_relations;
  /// Absolute gradient orientations of the structure angle set.
  std::vector<double> structure_angles;
  double likelihood = 0.0;
  double closure = 0.0;
  std::size_t probe_disagreements = 0;
  std::size_t bridges = 0;
  bool refined = false;
  std::string failure;
  double iou_vs_component = 0.0;
};

struct PolygonizeResult {
  /// Continuous pixel frame: pixel (x, y) covers [x, x+1) x [y, y+1).
  std::vector<Polygon> polygons;
  std::vector<ComponentReport> components;
  std::size_t skipped_small = 0;
  std::size_t skipped_border = 0;
  std::size_t skipped_degenerate = 0;
};

/// Threshold, label, and regularize every component. Geometric failures
/// degrade to the smoothed contour flagged unrefined. Components are processed
/// on up to config.jobs threads; the output order is the component order.
/// When `debug_dir` is given, per-component contour, theta and JSON dumps are
/// written there.
PolygonizeResult polygonize(const ProbabilityMap& map, const PipelineConfig& config,
                            const std::optional<std::filesystem::path>& debug_dir = std::nullopt);

}  // namespace rgapoly
