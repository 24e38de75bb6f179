#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgapoly/bors.hpp"
#include "rgapoly/contour.hpp"
#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"
#include "rgapoly/rga.hpp"

namespace rgapoly {

struct RefineParams {
  /// Shortest run of identical (1-degree) contour angles that forms an edge.
  int min_run = 3;
  /// Largest distance from a run angle to a structure angle for a structure edge.
  double structure_tolerance = 2.0;
  /// Lines closer than this in direction (mod 180) are parallel.
  double parallel_epsilon = 0.5;
  /// Edge-map probe neighbourhood is (2r+1)^2 around the rounded point.
  int probe_radius = 1;
  /// Parallel same-direction neighbours closer than this laterally are merged.
  double collinear_tolerance = 1.0;
  /// Polygon sides shorter than this collapse.
  double vertex_merge_distance = 0.25;
  /// Move every fitted line outward by half a pixel's extent along its normal.
  /// Contours traced through border pixel centres sit that far inside the
  /// region boundary.
  bool outward_bias = false;
};

/// Circular index range [start, start + length) over n samples.
struct IndexSpan {
  std::size_t start = 0;
  std::size_t length = 0;

  std::size_t end(std::size_t n) const noexcept { return (start + length) % n; }
  bool contains(std::size_t i, std::size_t n) const noexcept {
    return (i + n - start) % n < length;
  }
};

/// Line with fixed direction. Every point p on it satisfies
/// dot(p, unit_normal()) == normal_offset.
struct EdgeLine {
  double direction = 0.0;  ///< travel direction, degrees in [0, 360)
  Point2 anchor;
  double normal_offset = 0.0;

  Point2 unit_direction() const { return unit_vector(direction); }
  /// Points to the interior side (the gradient orientation).
  Point2 unit_normal() const { return unit_vector(direction + 90.0); }
  double signed_distance(const Point2& p) const { return dot(p, unit_normal()) - normal_offset; }
};

struct CandidateEdge {
  IndexSpan span;
  std::vector<Point2> points;
  double rga_angle = 0.0;       ///< relative frame
  double absolute_angle = 0.0;  ///< gradient orientation in the image
  bool is_structure = false;
  bool trusted = true;
  bool is_bridge = false;
  std::optional<EdgeLine> line;
};

/// Samples strictly between two consecutive structure edges, split into the
/// candidate set (points of candidate edges) and the edge-transition set.
struct TransitionSignal {
  IndexSpan span;
  std::size_t signal_size = 0;  ///< n of the angle signal the indices refer to
  std::vector<std::size_t> candidate_points;
  std::vector<std::size_t> transition_points;
  /// Indices into Segmentation::edges of the candidate edges inside the span.
  std::vector<std::size_t> edges;
};

struct Segmentation {
  std::vector<CandidateEdge> edges;  ///< every run >= min_run, contour order
  std::vector<TransitionSignal> transitions;
};

struct Polygon {
  std::vector<Point2> vertices;
  int source_component = -1;
  bool refined = false;
};

/// Histogram mass outside the structure angles: 1 - sum of hist(a), a in A.
double energy(const ContourAngleSignal& signal, const StructureAngleSet& structure);

/// Maximal runs of identical 1-degree contour angles. Throws NoStructureEdges
/// when no run matches the structure set.
Segmentation segment_edges(const ContourAngleSignal& signal, const StructureAngleSet& structure,
                           const RefineParams& params = {});

/// True when some point of the edge, rounded to a pixel, has an edge-map bit
/// set within `probe_radius`.
bool has_edge_support(std::span<const Point2> points, const EdgeMap& edges, int probe_radius);

/// Keeps candidate edges with edge-map support in the candidate set and moves
/// the rest to the transition set, clearing their `trusted` flag.
TransitionSignal filter_noise_edges(const TransitionSignal& transition,
                                    std::vector<CandidateEdge>& edges, const EdgeMap& edge_map,
                                    int probe_radius = 1);

/// Nearest angle by circular distance; ties go to the smaller angle.
int nearest_structure_angle(double angle, std::span<const int> angles);

CandidateEdge quantize_edge_angle(CandidateEdge edge, const StructureAngleSet& structure,
                                  double base_orientation);

/// Least-squares line with its direction fixed perpendicular to
/// `gradient_angle`; only the normal offset is estimated.
EdgeLine fit_line_fixed_slope(std::span<const Point2> points, double gradient_angle);

/// Snaps each structure edge to its structure angle and fits its line.
std::vector<CandidateEdge> fit_structure_lines(std::vector<CandidateEdge> edges,
                                               const StructureAngleSet& structure,
                                               double base_orientation);

bool are_parallel(const EdgeLine& a, const EdgeLine& b, double epsilon);

/// Throws NearParallel when the directions are within `parallel_epsilon` (mod 180).
Point2 intersect_lines(const EdgeLine& a, const EdgeLine& b, double parallel_epsilon = 0.5);

/// New edge joining two consecutive parallel edges. Built from the
/// `transition` samples whose position along e1 falls in the middle half of
/// the gap between the closest pair of points, or, failing two of those, from
/// three points spanning the lateral gap at its along-edge midpoint. Its angle
/// is quantized to the nearest structure angle not parallel to e1. Throws
/// DegenerateGap when the two lines are collinear.
CandidateEdge parallel_bridge(const CandidateEdge& e1, const CandidateEdge& e2,
                              std::span<const Point2> transition,
                              const StructureAngleSet& structure, double base_orientation,
                              const RefineParams& params = {});

struct Assembly {
  Polygon polygon;
  std::vector<CandidateEdge> ring;  ///< final edges, bridges included; vertex k ends ring[k]
  std::size_t bridges = 0;
  std::size_t merges = 0;
  std::size_t removed = 0;
};

/// Intersects consecutive edges of the circular chain into polygon vertices.
/// Collinear neighbours are merged, parallel ones bridged, and edges whose
/// intersections come out reversed are dropped. Throws TooFewEdges.
Assembly assemble_polygon(std::vector<CandidateEdge> chain, std::span<const Point2> samples,
                          const StructureAngleSet& structure, double base_orientation,
                          const RefineParams& params = {});

struct RefineResult {
  Polygon polygon;
  /// Empty when refined; otherwise the error kind that stopped refinement.
  std::string failure;
  Segmentation segmentation;
  Assembly assembly;
};

/// Full refinement of one component. On NoStructureEdges, TooFewEdges or an
/// invalid assembled polygon the smoothed contour is returned unrefined.
RefineResult refine_component(const Contour& smoothed, const ContourAngleSignal& signal,
                              const StructureAngleSet& structure, const EdgeMap& edge_map,
                              const RefineParams& params = {});

/// Largest distance from any polygon side's gradient orientation to the
/// nearest of `absolute_angles`.
double max_structure_deviation(const Polygon& polygon, std::span<const double> absolute_angles);

/// True when no two non-adjacent sides intersect.
bool is_simple_polygon(std::span<const Point2> vertices);

}  // namespace rgapoly
