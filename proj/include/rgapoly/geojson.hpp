#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgapoly/refine.hpp"

namespace rgapoly {

/// FeatureCollection text. Rings are closed, coordinates rounded to three
/// decimals, properties are {component_id, refined}.
std::string to_geojson(std::span<const Polygon> polygons);

/// Throws IoError when the file cannot be written.
void export_geojson(std::span<const Polygon> polygons, const std::filesystem::path& path);

/// Reads the first ring of each Polygon feature; the closing vertex is dropped.
std::vector<Polygon> parse_geojson(std::string_view text);
std::vector<Polygon> load_geojson(const std::filesystem::path& path);

}  // namespace rgapoly
