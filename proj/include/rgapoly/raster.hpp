#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgapoly/error.hpp"

namespace rgapoly {

/// Row-major 2-D grid. Coordinates are (x, y) with y pointing down.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}
  Grid(int width, int height, std::vector<T> values)
      : width_(width), height_(height), data_(std::move(values)) {
    if (data_.size() != static_cast<std::size_t>(checked_area(width, height)))
      throw Error(ErrorCode::DimensionMismatch,
                  "grid payload has " + std::to_string(data_.size()) + " values, expected " +
                      std::to_string(static_cast<long long>(width) * height));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  /// Replicate-border access.
  const T& clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static long long checked_area(int width, int height) {
    if (width < 0 || height < 0)
      throw Error(ErrorCode::DimensionMismatch, "negative grid dimensions");
    return static_cast<long long>(width) * height;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using BinaryMask = Grid<std::uint8_t>;

/// Per-pixel building probability; every value lies in [0, 1].
class ProbabilityMap : public Grid<double> {
 public:
  ProbabilityMap() = default;
  /// Throws ValueOutOfRange for NaN or values outside [0, 1].
  ProbabilityMap(int width, int height, std::vector<double> values);
  ProbabilityMap(int width, int height, double fill);
};

/// Sobel response normalized by its global maximum, and its thresholded bits.
struct EdgeMap {
  Grid<double> gradient;
  BinaryMask bits;
  double tau = 0.0;

  int width() const noexcept { return gradient.width(); }
  int height() const noexcept { return gradient.height(); }
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive

  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  bool contains(int x, int y) const noexcept {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

/// One 8-connected component. The mask is cropped to bbox; contains() takes
/// image coordinates.
struct ComponentMask {
  int id = 0;
  BinaryMask mask;
  BoundingBox bbox;
  std::size_t pixel_count = 0;

  bool contains(int x, int y) const noexcept {
    return bbox.contains(x, y) && mask(x - bbox.x0, y - bbox.y0) != 0;
  }
  bool touches_border(int image_width, int image_height) const noexcept {
    return bbox.x0 == 0 || bbox.y0 == 0 || bbox.x1 == image_width - 1 ||
           bbox.y1 == image_height - 1;
  }
  /// Component painted into a full-size image mask.
  BinaryMask to_image_mask(int image_width, int image_height) const;
};

enum class MapFormat { Pgm8, Pgm16, F32Raw };

MapFormat parse_map_format(std::string_view name);
/// Guess from the extension: .f32/.raw -> F32Raw, anything else -> PGM.
MapFormat guess_map_format(const std::filesystem::path& path);

/// Sidecar for f32raw payloads: "<stem>.json" next to the payload, falling
/// back to "<file>.json".
std::filesystem::path f32_sidecar_path(const std::filesystem::path& payload);

/// Loads a probability map. PGM samples are divided by the header maxval
/// (255 / 65535 for standard files); f32raw values are clamped to [0, 1]
/// with a warning appended to `warnings` when given.
ProbabilityMap load_probability_map(const std::filesystem::path& path, MapFormat format,
                                    std::vector<std::string>* warnings = nullptr);

/// Reads any P5 PGM as a mask: nonzero samples are set.
BinaryMask load_mask_pgm(const std::filesystem::path& path);

/// Writes a P5 PGM with values {0, 255}.
void save_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);
/// Writes an 8-bit P5 PGM, probabilities scaled by 255 and rounded.
void save_pgm8(const std::filesystem::path& path, const ProbabilityMap& map);
/// Writes little-endian float32 payload and its JSON sidecar.
void save_f32raw(const std::filesystem::path& path, const ProbabilityMap& map);

/// bit(x, y) = P(x, y) > t.
BinaryMask threshold_mask(const ProbabilityMap& map, double t = 0.5);

/// 3x3 Sobel magnitude with replicate padding, divided by its maximum.
/// Throws ImageTooSmall below 3x3.
EdgeMap sobel_edge_map(const ProbabilityMap& map, double tau);

/// 8-connected components ordered by the scanline position of their first pixel.
std::vector<ComponentMask> connected_components(const BinaryMask& mask);

std::size_t count_set(const BinaryMask& mask);

}  // namespace rgapoly
