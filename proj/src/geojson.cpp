#include "rgapoly/geojson.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rgapoly {

namespace {

using nlohmann::json;

double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

}  // namespace

std::string to_geojson(std::span<const Polygon> polygons) {
  json features = json::array();
  for (const Polygon& p : polygons) {
    json ring = json::array();
    for (const Point2& v : p.vertices) ring.push_back({round3(v.x), round3(v.y)});
    if (!p.vertices.empty()) ring.push_back(ring.front());
    features.push_back({
        {"type", "Feature"},
        {"properties", {{"component_id", p.source_component}, {"refined", p.refined}}},
        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
    });
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  return doc.dump(1) + "\n";
}

void export_geojson(std::span<const Polygon> polygons, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << to_geojson(polygons);
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::vector<Polygon> parse_geojson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("GeoJSON: ") + e.what());
  }
  std::vector<Polygon> out;
  try {
    for (const json& f : doc.at("features")) {
      const json& geom = f.at("geometry");
      if (geom.at("type") != "Polygon") continue;
      Polygon p;
      if (f.contains("properties") && f["properties"].is_object()) {
        const json& props = f["properties"];
        p.source_component = props.value("component_id", -1);
        p.refined = props.value("refined", false);
      }
      const json& ring = geom.at("coordinates").at(0);
      for (const json& c : ring) p.vertices.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      if (p.vertices.size() > 1 && p.vertices.front() == p.vertices.back()) p.vertices.pop_back();
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("GeoJSON: ") + e.what());
  }
  return out;
}

std::vector<Polygon> load_geojson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geojson(buf.str());
}

}  // namespace rgapoly
