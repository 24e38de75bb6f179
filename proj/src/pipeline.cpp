#include "rgapoly/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rgapoly/contour.hpp"
#include "rgapoly/metrics.hpp"
#include "rgapoly/rga.hpp"

namespace rgapoly {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

std::vector<Point2> shifted(std::vector<Point2> pts) {
  for (Point2& p : pts) p += Point2{0.5, 0.5};
  return pts;
}

json debug_dump(const ComponentReport& report, const RefineResult& refined) {
  json runs = json::array();
  for (const CandidateEdge& e : refined.segmentation.edges) {
    json run = {{"start", e.span.start},          {"length", e.span.length},
                {"rga_angle", e.rga_angle},       {"absolute_angle", e.absolute_angle},
                {"structure", e.is_structure},    {"trusted", e.trusted}};
    if (e.line)
      run["line"] = {{"direction", e.line->direction}, {"offset", e.line->normal_offset}};
    runs.push_back(run);
  }
  json transitions = json::array();
  for (const TransitionSignal& t : refined.segmentation.transitions)
    transitions.push_back({{"start", t.span.start},
                           {"length", t.span.length},
                           {"candidate_points", t.candidate_points.size()},
                           {"transition_points", t.transition_points.size()}});
  json lines = json::array();
  for (const CandidateEdge& e : refined.assembly.ring)
    if (e.line)
      lines.push_back({{"direction", e.line->direction},
                       {"offset", e.line->normal_offset},
                       {"bridge", e.is_bridge}});
  json vertices = json::array();
  for (const Point2& v : refined.polygon.vertices) vertices.push_back({v.x + 0.5, v.y + 0.5});
  return {{"component_id", report.component_id},
          {"pixel_count", report.pixel_count},
          {"contour_points", report.contour_points},
          {"base_orientation", report.base_orientation},
          {"alpha_hat", report.alpha_hat},
          {"bors", report.bor_relations},
          {"structure_angles", report.structure_angles},
          {"likelihood", report.likelihood},
          {"closure", report.closure},
          {"refined", report.refined},
          {"failure", report.failure},
          {"runs", runs},
          {"transitions", transitions},
          {"lines", lines},
          {"vertices", vertices}};
}

struct ComponentOutcome {
  std::optional<Polygon> polygon;
  ComponentReport report;
  bool degenerate = false;
};

ComponentOutcome process_component(const ComponentMask& comp, const EdgeMap& edge_map,
                                   const BorsBank& bank, const PipelineConfig& config,
                                   int width, int height,
                                   const std::optional<std::filesystem::path>& debug_dir) {
  ComponentOutcome out;
  ComponentReport& report = out.report;
  report.component_id = comp.id;
  report.pixel_count = comp.pixel_count;

  Contour contour;
  try {
    contour = trace_contour(comp);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateComponent) throw;
    out.degenerate = true;
    report.failure = std::string(to_string(e.code()));
    return out;
  }
  const Contour smoothed = remove_repeated_points(smooth_contour(contour, config.smoothing_window));
  report.contour_points = smoothed.size();

  Polygon polygon;
  polygon.source_component = comp.id;
  polygon.vertices = smoothed.points;
  RefineResult refined;
  std::optional<ContourAngleSignal> signal;
  try {
    TangentDiagnostics diag;
    const auto samples = tangent_samples(smoothed, &comp, &diag);
    report.probe_disagreements = diag.probe_disagreements;
    signal = median_filter_circular(rga_transform(samples, config.closure_tolerance),
                                    config.median_window);
    report.closure = signal->closure;
    report.base_orientation = signal->base_orientation;
    const StructureAngleSet structure = select_bors(angle_histogram(*signal), bank);
    report.alpha_hat = structure.alpha_hat;
    report.bor_relations.assign(structure.bor_set.relations().begin(),
                                structure.bor_set.relations().end());
    report.structure_angles = structure.absolute(signal->base_orientation);
    report.likelihood = structure.likelihood;
    refined = refine_component(smoothed, *signal, structure, edge_map, config.refine);
    report.failure = refined.failure;
    report.bridges = refined.assembly.bridges;
    polygon.vertices = refined.polygon.vertices;
    polygon.refined = refined.polygon.refined;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::ClosureViolation:
      case ErrorCode::ZeroLengthSegment:
      case ErrorCode::DegenerateComponent:
        report.failure = std::string(to_string(e.code()));
        break;
      default:
        throw;
    }
  }
  polygon.vertices = shifted(std::move(polygon.vertices));
  report.refined = polygon.refined;
  report.iou_vs_component =
      iou(rasterize_polygon(polygon, width, height), comp.to_image_mask(width, height));

  if (debug_dir) {
    const std::string stem = "component_" + std::to_string(comp.id);
    write_contour_csv(*debug_dir / (stem + "_contour.csv"), smoothed);
    if (signal) write_theta_csv(*debug_dir / (stem + "_theta.csv"), *signal);
    std::ofstream js(*debug_dir / (stem + ".json"), std::ios::binary);
    if (!js) throw Error(ErrorCode::IoError, "cannot write debug dump for " + stem);
    js << debug_dump(report, refined).dump(2) << "\n";
  }
  out.polygon = std::move(polygon);
  return out;
}

}  // namespace

void validate(const PipelineConfig& c) {
  require(c.threshold > 0.0 && c.threshold < 1.0, "threshold must lie in (0, 1)");
  require(c.edge_tau > 0.0 && c.edge_tau < 1.0, "tau must lie in (0, 1)");
  require(c.smoothing_window >= 1 && c.smoothing_window % 2 == 1, "wa must be odd and >= 1");
  require(c.median_window >= 1 && c.median_window % 2 == 1, "wm must be odd and >= 1");
  require(!c.bors_bank.empty(), "BORS bank is empty");
  BorsBank bank(c.bors_bank);
  require(c.refine.min_run >= 1, "min_run must be >= 1");
  require(c.refine.structure_tolerance >= 0.0, "structure_tolerance must be >= 0");
  require(c.refine.parallel_epsilon > 0.0 && c.refine.parallel_epsilon < 45.0,
          "parallel_epsilon must lie in (0, 45)");
  require(c.refine.probe_radius >= 0, "probe_radius must be >= 0");
  require(c.refine.collinear_tolerance >= 0.0, "collinear_tolerance must be >= 0");
  require(c.closure_tolerance > 0.0, "closure tolerance must be positive");
  require(c.jobs >= 1, "jobs must be >= 1");
}

void apply_config_json(PipelineConfig& config, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  require(doc.is_object(), "config must be a JSON object");
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "threshold") config.threshold = v.get<double>();
      else if (key == "wa") config.smoothing_window = v.get<int>();
      else if (key == "wm") config.median_window = v.get<int>();
      else if (key == "tau") config.edge_tau = v.get<double>();
      else if (key == "keep_border")
        config.border_policy = v.get<bool>() ? BorderPolicy::Keep : BorderPolicy::SkipTouching;
      else if (key == "min_area") config.min_component_px = v.get<std::size_t>();
      else if (key == "jobs") config.jobs = v.get<unsigned>();
      else if (key == "min_run") config.refine.min_run = v.get<int>();
      else if (key == "structure_tolerance") config.refine.structure_tolerance = v.get<double>();
      else if (key == "parallel_epsilon") config.refine.parallel_epsilon = v.get<double>();
      else if (key == "probe_radius") config.refine.probe_radius = v.get<int>();
      else if (key == "collinear_tolerance") config.refine.collinear_tolerance = v.get<double>();
      else if (key == "bors") {
        require(v.is_array(), "bors must be a list");
        config.bors_bank.clear();
        for (const json& set : v)
          config.bors_bank.push_back(set.is_string() ? parse_bor_set(set.get<std::string>())
                                                     : BorSet(set.get<std::vector<int>>()));
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
}

void apply_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_json(config, buf.str());
}

PolygonizeResult polygonize(const ProbabilityMap& map, const PipelineConfig& config,
                            const std::optional<std::filesystem::path>& debug_dir) {
  validate(config);
  const BorsBank bank(config.bors_bank);
  const int w = map.width(), h = map.height();

  PolygonizeResult result;
  std::vector<ComponentMask> kept;
  for (ComponentMask& c : connected_components(threshold_mask(map, config.threshold))) {
    if (c.pixel_count < config.min_component_px) {
      ++result.skipped_small;
    } else if (config.border_policy == BorderPolicy::SkipTouching && c.touches_border(w, h)) {
      ++result.skipped_border;
    } else {
      kept.push_back(std::move(c));
    }
  }
  if (kept.empty()) return result;
  if (debug_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*debug_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + debug_dir->string());
  }

  const EdgeMap edge_map = sobel_edge_map(map, config.edge_tau);
  std::vector<ComponentOutcome> outcomes(kept.size());
  std::vector<std::exception_ptr> errors(kept.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < kept.size(); i = next++) {
      try {
        outcomes[i] = process_component(kept[i], edge_map, bank, config, w, h, debug_dir);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(config.jobs, kept.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (ComponentOutcome& o : outcomes) {
    if (o.degenerate) ++result.skipped_degenerate;
    if (o.polygon) result.polygons.push_back(std::move(*o.polygon));
    result.components.push_back(std::move(o.report));
  }
  return result;
}

}  // namespace rgapoly
