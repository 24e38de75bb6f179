#include "rgapoly/raster.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace rgapoly {

namespace {

void check_probabilities(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::isnan(v) || v < 0.0 || v > 1.0)
      throw Error(ErrorCode::ValueOutOfRange,
                  "probability at index " + std::to_string(i) + " is " + std::to_string(v));
  }
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

PgmHeader parse_pgm_header(const std::vector<unsigned char>& bytes) {
  std::size_t pos = 0;
  auto fail = [](const std::string& why) -> PgmHeader {
    throw Error(ErrorCode::MalformedHeader, why);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') return fail("missing P5 magic");
  pos = 2;

  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* field) {
    skip_space_and_comments();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      fail(std::string("expected integer for ") + field);
    long long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1LL << 31)) fail(std::string(field) + " too large");
      ++pos;
    }
    return static_cast<int>(value);
  };

  PgmHeader h;
  h.width = read_int("width");
  h.height = read_int("height");
  h.maxval = read_int("maxval");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("missing whitespace after maxval");
  ++pos;
  if (h.width <= 0 || h.height <= 0) fail("non-positive dimensions");
  if (h.maxval <= 0 || h.maxval > 65535) fail("maxval out of range");
  h.data_offset = pos;
  return h;
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 std::span<const unsigned char> payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace

ProbabilityMap::ProbabilityMap(int width, int height, std::vector<double> values)
    : Grid<double>(width, height, std::move(values)) {
  check_probabilities(this->values());
}

ProbabilityMap::ProbabilityMap(int width, int height, double fill)
    : Grid<double>(width, height, fill) {
  check_probabilities(this->values());
}

BinaryMask ComponentMask::to_image_mask(int image_width, int image_height) const {
  BinaryMask out(image_width, image_height, 0);
  for (int y = bbox.y0; y <= bbox.y1; ++y)
    for (int x = bbox.x0; x <= bbox.x1; ++x)
      if (out.in_bounds(x, y) && contains(x, y)) out(x, y) = 1;
  return out;
}

MapFormat parse_map_format(std::string_view name) {
  if (name == "pgm8") return MapFormat::Pgm8;
  if (name == "pgm16") return MapFormat::Pgm16;
  if (name == "f32raw") return MapFormat::F32Raw;
  throw Error(ErrorCode::InvalidConfig, "unknown map format '" + std::string(name) + "'");
}

MapFormat guess_map_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".f32" || ext == ".raw") return MapFormat::F32Raw;
  return MapFormat::Pgm8;
}

std::filesystem::path f32_sidecar_path(const std::filesystem::path& payload) {
  auto stem_json = payload;
  stem_json.replace_extension(".json");
  if (std::filesystem::exists(stem_json) || !std::filesystem::exists(payload.string() + ".json"))
    return stem_json;
  return payload.string() + ".json";
}

ProbabilityMap load_probability_map(const std::filesystem::path& path, MapFormat format,
                                    std::vector<std::string>* warnings) {
  const auto bytes = read_file(path);

  if (format == MapFormat::F32Raw) {
    const auto sidecar = f32_sidecar_path(path);
    std::ifstream in(sidecar);
    if (!in) throw Error(ErrorCode::IoError, "missing sidecar " + sidecar.string());
    nlohmann::json meta;
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedHeader, "sidecar " + sidecar.string() + ": " + e.what());
    }
    if (!meta.contains("width") || !meta.contains("height") || !meta["width"].is_number_integer() ||
        !meta["height"].is_number_integer())
      throw Error(ErrorCode::MalformedHeader, "sidecar needs integer width and height");
    const int w = meta["width"].get<int>();
    const int h = meta["height"].get<int>();
    if (w <= 0 || h <= 0) throw Error(ErrorCode::MalformedHeader, "non-positive dimensions");
    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() != count * 4)
      throw Error(ErrorCode::DimensionMismatch,
                  "payload has " + std::to_string(bytes.size()) + " bytes, sidecar implies " +
                      std::to_string(count * 4));

    std::vector<double> values(count);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t bits = 0;
      for (int b = 3; b >= 0; --b) bits = (bits << 8) | bytes[i * 4 + static_cast<std::size_t>(b)];
      const float f = std::bit_cast<float>(bits);
      if (std::isnan(f))
        throw Error(ErrorCode::ValueOutOfRange, "NaN at index " + std::to_string(i));
      double v = f;
      if (v < 0.0 || v > 1.0) {
        v = std::clamp(v, 0.0, 1.0);
        ++clamped;
      }
      values[i] = v;
    }
    if (clamped > 0 && warnings)
      warnings->push_back(std::to_string(clamped) + " value(s) outside [0,1] clamped in " +
                          path.string());
    return ProbabilityMap(w, h, std::move(values));
  }

  const PgmHeader h = parse_pgm_header(bytes);
  const bool wide = h.maxval > 255;
  if (format == MapFormat::Pgm16 && !wide && warnings)
    warnings->push_back("pgm16 requested but maxval is " + std::to_string(h.maxval) +
                        "; reading 8-bit samples");
  if (format == MapFormat::Pgm8 && wide && warnings)
    warnings->push_back("pgm8 requested but maxval is " + std::to_string(h.maxval) +
                        "; reading 16-bit samples");
  const std::size_t count = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height);
  const std::size_t need = count * (wide ? 2 : 1);
  if (bytes.size() - h.data_offset != need)
    throw Error(ErrorCode::DimensionMismatch,
                "PGM payload has " + std::to_string(bytes.size() - h.data_offset) +
                    " bytes, header implies " + std::to_string(need));

  std::vector<double> values(count);
  const double scale = 1.0 / h.maxval;
  for (std::size_t i = 0; i < count; ++i) {
    unsigned v = 0;
    if (wide) {
      v = (static_cast<unsigned>(bytes[h.data_offset + 2 * i]) << 8) |
          bytes[h.data_offset + 2 * i + 1];
    } else {
      v = bytes[h.data_offset + i];
    }
    if (v > static_cast<unsigned>(h.maxval))
      throw Error(ErrorCode::ValueOutOfRange, "sample exceeds maxval at index " + std::to_string(i));
    values[i] = v * scale;
  }
  return ProbabilityMap(h.width, h.height, std::move(values));
}

BinaryMask load_mask_pgm(const std::filesystem::path& path) {
  const auto map = load_probability_map(path, MapFormat::Pgm8);
  BinaryMask mask(map.width(), map.height(), 0);
  auto src = map.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > 0.0 ? 1 : 0;
  return mask;
}

void save_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<unsigned char> payload(mask.size());
  auto src = mask.values();
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = src[i] ? 255 : 0;
  write_bytes(path,
              "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n",
              payload);
}

void save_pgm8(const std::filesystem::path& path, const ProbabilityMap& map) {
  std::vector<unsigned char> payload(map.size());
  auto src = map.values();
  for (std::size_t i = 0; i < payload.size(); ++i)
    payload[i] = static_cast<unsigned char>(std::lround(src[i] * 255.0));
  write_bytes(path,
              "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n255\n",
              payload);
}

void save_f32raw(const std::filesystem::path& path, const ProbabilityMap& map) {
  std::vector<unsigned char> payload(map.size() * 4);
  auto src = map.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(src[i]));
    for (int b = 0; b < 4; ++b)
      payload[i * 4 + static_cast<std::size_t>(b)] = static_cast<unsigned char>(bits >> (8 * b));
  }
  write_bytes(path, "", payload);

  auto sidecar = path;
  sidecar.replace_extension(".json");
  std::ofstream out(sidecar);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + sidecar.string());
  out << nlohmann::json{{"width", map.width()}, {"height", map.height()}}.dump() << "\n";
}

BinaryMask threshold_mask(const ProbabilityMap& map, double t) {
  BinaryMask mask(map.width(), map.height(), 0);
  auto src = map.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > t ? 1 : 0;
  return mask;
}

EdgeMap sobel_edge_map(const ProbabilityMap& map, double tau) {
  const int w = map.width();
  const int h = map.height();
  if (w < 3 || h < 3)
    throw Error(ErrorCode::ImageTooSmall,
                "Sobel needs at least 3x3, got " + std::to_string(w) + "x" + std::to_string(h));

  EdgeMap edges;
  edges.tau = tau;
  edges.gradient = Grid<double>(w, h, 0.0);
  double peak = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto p = [&](int dx, int dy) { return map.clamped(x + dx, y + dy); };
      // Outer taps are paired before adding the centre tap so the result is
      // bitwise symmetric under 90-degree rotations of the input.
      const double right = (p(1, -1) + p(1, 1)) + 2.0 * p(1, 0);
      const double left = (p(-1, -1) + p(-1, 1)) + 2.0 * p(-1, 0);
      const double down = (p(-1, 1) + p(1, 1)) + 2.0 * p(0, 1);
      const double up = (p(-1, -1) + p(1, -1)) + 2.0 * p(0, -1);
      const double gx = right - left;
      const double gy = down - up;
      const double mag = std::sqrt(gx * gx + gy * gy);
      edges.gradient(x, y) = mag;
      peak = std::max(peak, mag);
    }
  }
  if (peak > 0.0)
    for (double& g : edges.gradient.values()) g /= peak;

  edges.bits = BinaryMask(w, h, 0);
  auto g = edges.gradient.values();
  auto b = edges.bits.values();
  for (std::size_t i = 0; i < g.size(); ++i) b[i] = g[i] > tau ? 1 : 0;
  return edges;
}

std::vector<ComponentMask> connected_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Grid<int> label(w, h, -1);
  std::vector<ComponentMask> out;
  std::vector<std::pair<int, int>> stack;
  std::vector<std::pair<int, int>> members;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y) || label(x, y) >= 0) continue;
      const int id = static_cast<int>(out.size());
      BoundingBox box{x, y, x, y};
      members.clear();
      stack.assign(1, {x, y});
      label(x, y) = id;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        members.emplace_back(cx, cy);
        box.x0 = std::min(box.x0, cx);
        box.x1 = std::max(box.x1, cx);
        box.y0 = std::min(box.y0, cy);
        box.y1 = std::max(box.y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if ((dx || dy) && mask.in_bounds(nx, ny) && mask(nx, ny) && label(nx, ny) < 0) {
              label(nx, ny) = id;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      ComponentMask comp;
      comp.id = id;
      comp.bbox = box;
      comp.pixel_count = members.size();
      comp.mask = BinaryMask(box.width(), box.height(), 0);
      for (const auto& [mx, my] : members) comp.mask(mx - box.x0, my - box.y0) = 1;
      out.push_back(std::move(comp));
    }
  }
  return out;
}

std::size_t count_set(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(), [](auto v) { return v != 0; }));
}

}  // namespace rgapoly
