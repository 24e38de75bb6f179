#include "rgapoly/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rgapoly/metrics.hpp"

namespace rgapoly {

namespace {

using nlohmann::json;

std::vector<std::pair<int, int>> disk_offsets(double radius) {
  std::vector<std::pair<int, int>> out;
  const int r = static_cast<int>(std::floor(radius));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= radius * radius) out.emplace_back(dx, dy);
  return out;
}

// Uniform in (0, 1], 53 random bits.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

BinaryMask open_with_disk(const BinaryMask& mask, double radius) {
  if (radius < 1.0) return mask;
  const auto disk = disk_offsets(radius);
  const int w = mask.width(), h = mask.height();
  BinaryMask eroded(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      bool keep = true;
      for (auto [dx, dy] : disk)
        if (!mask.in_bounds(x + dx, y + dy) || !mask(x + dx, y + dy)) {
          keep = false;
          break;
        }
      eroded(x, y) = keep;
    }
  BinaryMask opened(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!eroded(x, y)) continue;
      for (auto [dx, dy] : disk)
        if (opened.in_bounds(x + dx, y + dy)) opened(x + dx, y + dy) = 1;
    }
  return opened;
}

Grid<double> gaussian_blur(const Grid<double>& image, double sigma) {
  if (sigma <= 0.0) return image;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
  double total = 0.0;
  for (int k = -r; k <= r; ++k) {
    const double v = std::exp(-0.5 * k * k / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + r)] = v;
    total += v;
  }
  for (double& v : kernel) v /= total;

  const int w = image.width(), h = image.height();
  Grid<double> tmp(w, h, 0.0), out(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += kernel[static_cast<std::size_t>(k + r)] * image.clamped(x + k, y);
      tmp(x, y) = s;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += kernel[static_cast<std::size_t>(k + r)] * tmp.clamped(x, y + k);
      out(x, y) = s;
    }
  return out;
}

SynthScene synth_probability_map(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0)
    throw Error(ErrorCode::InvalidConfig, "canvas must be positive");
  if (spec.corner_round_radius < 0.0 || spec.blur_sigma < 0.0 || spec.noise_sigma < 0.0)
    throw Error(ErrorCode::InvalidConfig, "scene parameters must be non-negative");

  BinaryMask gt(spec.width, spec.height, 0);
  for (std::size_t s = 0; s < spec.shapes.size(); ++s) {
    const auto& shape = spec.shapes[s];
    if (shape.size() < 3)
      throw Error(ErrorCode::InvalidConfig, "shape " + std::to_string(s) + " has fewer than 3 vertices");
    for (const Point2& p : shape)
      if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= spec.width && p.y <= spec.height))
        throw Error(ErrorCode::ShapeOutOfCanvas,
                    "shape " + std::to_string(s) + " leaves the " + std::to_string(spec.width) +
                        "x" + std::to_string(spec.height) + " canvas");
    const BinaryMask raster = rasterize_polygon(shape, spec.width, spec.height);
    for (std::size_t i = 0; i < raster.size(); ++i) {
      if (!raster.values()[i]) continue;
      if (gt.values()[i])
        throw Error(ErrorCode::InvalidConfig, "shape " + std::to_string(s) + " overlaps another shape");
      gt.values()[i] = 1;
    }
  }

  const BinaryMask opened = open_with_disk(gt, spec.corner_round_radius);
  Grid<double> img(spec.width, spec.height, 0.0);
  for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = opened.values()[i] ? 1.0 : 0.0;
  img = gaussian_blur(img, spec.blur_sigma);

  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    auto vals = img.values();
    for (std::size_t i = 0; i < vals.size(); i += 2) {
      const double u1 = uniform_open(rng), u2 = uniform_open(rng);
      const double m = std::sqrt(-2.0 * std::log(u1));
      vals[i] += spec.noise_sigma * m * std::cos(2.0 * kPi * u2);
      if (i + 1 < vals.size()) vals[i + 1] += spec.noise_sigma * m * std::sin(2.0 * kPi * u2);
    }
  }
  std::vector<double> clamped(img.values().begin(), img.values().end());
  for (double& v : clamped) v = std::clamp(v, 0.0, 1.0);
  return {ProbabilityMap(spec.width, spec.height, std::move(clamped)), std::move(gt)};
}

SceneSpec parse_scene_spec(std::string_view json_text) {
  SceneSpec spec;
  try {
    const json doc = json::parse(json_text);
    spec.width = doc.at("canvas").at("width").get<int>();
    spec.height = doc.at("canvas").at("height").get<int>();
    for (const json& shape : doc.at("shapes")) {
      std::vector<Point2> pts;
      for (const json& p : shape) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      spec.shapes.push_back(std::move(pts));
    }
    spec.corner_round_radius = doc.value("corner_round_radius", 0.0);
    spec.blur_sigma = doc.value("blur_sigma", 0.0);
    spec.noise_sigma = doc.value("noise_sigma", 0.0);
    spec.seed = doc.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("scene: ") + e.what());
  }
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene_spec(buf.str());
}

void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec) {
  json shapes = json::array();
  for (const auto& shape : spec.shapes) {
    json pts = json::array();
    for (const Point2& p : shape) pts.push_back({p.x, p.y});
    shapes.push_back(pts);
  }
  const json doc = {{"canvas", {{"width", spec.width}, {"height", spec.height}}},
                    {"shapes", shapes},
                    {"corner_round_radius", spec.corner_round_radius},
                    {"blur_sigma", spec.blur_sigma},
                    {"noise_sigma", spec.noise_sigma},
                    {"seed", spec.seed}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace rgapoly
