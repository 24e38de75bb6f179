#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"

namespace rgapoly {

/// Synthetic scene: ground-truth polygons degraded into a probability map.
struct SceneSpec {
  int width = 0;
  int height = 0;
  std::vector<std::vector<Point2>> shapes;
  double corner_round_radius = 0.0;
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SynthScene {
  ProbabilityMap map;
  BinaryMask ground_truth;
};

/// Rasterize, open with a disk, Gaussian blur, add seeded noise, clamp.
/// Noise draws come from std::mt19937_64 through Box-Muller.
/// Throws ShapeOutOfCanvas, and InvalidConfig for negative parameters or
/// overlapping shapes.
SynthScene synth_probability_map(const SceneSpec& spec);

/// Binary opening (erosion then dilation) with the disk dx^2 + dy^2 <= r^2.
/// Pixels outside the image count as background.
BinaryMask open_with_disk(const BinaryMask& mask, double radius);

/// Separable Gaussian, kernel truncated at ceil(3 sigma), replicate border.
Grid<double> gaussian_blur(const Grid<double>& image, double sigma);

SceneSpec parse_scene_spec(std::string_view json_text);
SceneSpec load_scene_spec(const std::filesystem::path& path);
void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec);

}  // namespace rgapoly
