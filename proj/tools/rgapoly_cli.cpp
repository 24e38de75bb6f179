// rgapoly: probability map -> regularized building polygons.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgapoly/geojson.hpp"
#include "rgapoly/metrics.hpp"
#include "rgapoly/pipeline.hpp"
#include "rgapoly/synth.hpp"

namespace fs = std::filesystem;
using namespace rgapoly;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

struct PolygonizeArgs {
  std::string input, format, output, config, debug_dir;
  double threshold = 0.5, tau = 0.1;
  int wa = 11, wm = 11;
  std::vector<std::string> bors;
  bool keep_border = false;
  std::size_t min_area = 16;
  unsigned jobs = 1;
};

int run_polygonize(const PolygonizeArgs& a, const CLI::App& cmd) {
  PipelineConfig cfg;
  if (!a.config.empty()) apply_config_file(cfg, a.config);
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--threshold")) cfg.threshold = a.threshold;
  if (given("--wa")) cfg.smoothing_window = a.wa;
  if (given("--wm")) cfg.median_window = a.wm;
  if (given("--tau")) cfg.edge_tau = a.tau;
  if (given("--bors")) {
    cfg.bors_bank.clear();
    for (const std::string& s : a.bors) cfg.bors_bank.push_back(parse_bor_set(s));
  }
  if (given("--keep-border")) cfg.border_policy = BorderPolicy::Keep;
  if (given("--min-area")) cfg.min_component_px = a.min_area;
  if (given("--jobs")) cfg.jobs = a.jobs;
  validate(cfg);

  const MapFormat format = a.format.empty() ? guess_map_format(a.input) : parse_map_format(a.format);
  std::vector<std::string> warnings;
  const ProbabilityMap map = load_probability_map(a.input, format, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  std::optional<fs::path> debug;
  if (!a.debug_dir.empty()) debug = fs::path(a.debug_dir);
  const PolygonizeResult result = polygonize(map, cfg, debug);
  export_geojson(result.polygons, a.output);

  std::size_t refined = 0;
  for (const Polygon& p : result.polygons) refined += p.refined;
  std::cerr << result.polygons.size() << " polygons (" << refined << " refined), skipped "
            << result.skipped_small << " small, " << result.skipped_border << " border, "
            << result.skipped_degenerate << " degenerate\n";
  for (const ComponentReport& r : result.components)
    if (!r.failure.empty())
      std::cerr << "component " << r.component_id << ": " << r.failure << "\n";
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& out_map, const std::string& out_gt) {
  const SynthScene scene = synth_probability_map(load_scene_spec(spec_path));
  if (guess_map_format(out_map) == MapFormat::F32Raw)
    save_f32raw(out_map, scene.map);
  else
    save_pgm8(out_map, scene.map);
  save_mask_pgm(out_gt, scene.ground_truth);
  return 0;
}

std::pair<int, int> parse_canvas(const std::string& text) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') ||
      w <= 0 || h <= 0)
    throw Error(ErrorCode::InvalidConfig, "canvas must look like WxH, got '" + text + "'");
  return {w, h};
}

int run_eval(const std::string& pred, const std::string& gt_path, const std::string& canvas) {
  const auto [w, h] = parse_canvas(canvas);
  const BinaryMask gt = load_mask_pgm(gt_path);
  if (gt.width() != w || gt.height() != h)
    throw Error(ErrorCode::DimensionMismatch, "ground truth is " + std::to_string(gt.width()) +
                                                  "x" + std::to_string(gt.height()) +
                                                  ", canvas is " + canvas);
  const std::vector<Polygon> polygons = load_geojson(pred);
  const EvalReport report = evaluate(polygons, gt);

  std::printf("kind,id,refined,building,iou\n");
  for (const PolygonScore& s : report.polygons)
    std::printf("polygon,%d,%d,%d,%.6f\n", s.component_id, s.refined ? 1 : 0, s.matched_building,
                s.iou);
  for (const BuildingScore& b : report.buildings)
    std::printf("building,%d,,%zu,%.6f\n", b.building, b.predictions, b.iou);
  std::printf("micro,,,,%.6f\n", report.micro_iou);
  std::printf("macro,,,,%.6f\n", report.macro_iou);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized building polygons from probability maps"};
  app.require_subcommand(1);

  PolygonizeArgs pa;
  auto* poly = app.add_subcommand("polygonize", "Probability map to GeoJSON polygons");
  poly->add_option("--input", pa.input, "Probability map (PGM or f32raw)")->required();
  poly->add_option("--format", pa.format, "pgm8 | pgm16 | f32raw (default: from extension)");
  poly->add_option("--output", pa.output, "GeoJSON output path")->required();
  poly->add_option("--config", pa.config, "JSON config file; flags override it");
  poly->add_option("--threshold", pa.threshold, "Probability threshold");
  poly->add_option("--wa", pa.wa, "Contour smoothing window (odd)");
  poly->add_option("--wm", pa.wm, "Angle median window (odd)");
  poly->add_option("--tau", pa.tau, "Edge map threshold");
  poly->add_option("--bors", pa.bors, "Relation set such as \"90,180,270\"; repeatable");
  poly->add_flag("--keep-border", pa.keep_border, "Keep components touching the image border");
  poly->add_option("--min-area", pa.min_area, "Smallest component in pixels");
  poly->add_option("--debug-dir", pa.debug_dir, "Per-component dumps");
  poly->add_option("--jobs", pa.jobs, "Worker threads");

  std::string spec_path, out_map, out_gt;
  auto* synth = app.add_subcommand("synth", "Synthetic probability map from a scene");
  synth->add_option("--spec", spec_path, "Scene JSON")->required();
  synth->add_option("--out-map", out_map, "Map output (.f32 for float32, else PGM)")->required();
  synth->add_option("--out-gt", out_gt, "Ground-truth PGM")->required();

  std::string pred, gt, canvas;
  auto* eval = app.add_subcommand("eval", "IoU of predicted polygons against a ground-truth mask");
  eval->add_option("--pred", pred, "GeoJSON predictions")->required();
  eval->add_option("--gt", gt, "Ground-truth PGM")->required();
  eval->add_option("--canvas", canvas, "WxH")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*poly) return run_polygonize(pa, *poly);
    if (*synth) return run_synth(spec_path, out_map, out_gt);
    if (*eval) return run_eval(pred, gt, canvas);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidConfig ? kExitConfig : kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
