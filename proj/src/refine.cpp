#include "rgapoly/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rgapoly {

namespace {

constexpr double kTieEpsilon = 1e-9;

std::vector<Point2> sample_midpoints(const ContourAngleSignal& signal) {
  std::vector<Point2> out;
  out.reserve(signal.samples.size());
  for (const auto& s : signal.samples) out.push_back(s.midpoint);
  return out;
}

double distance_to_set(double angle, std::span<const int> angles) {
  double best = std::numeric_limits<double>::infinity();
  for (int a : angles) best = std::min(best, circular_distance(angle, a));
  return best;
}

// Samples strictly after `a` and strictly before `b`, circularly.
std::vector<Point2> gap_points(std::span<const Point2> samples, const IndexSpan& a,
                               const IndexSpan& b) {
  const std::size_t n = samples.size();
  std::vector<Point2> out;
  if (n == 0) return out;
  const std::size_t from = a.end(n);
  const std::size_t count = (b.start + n - from) % n;
  for (std::size_t k = 0; k < count; ++k) out.push_back(samples[(from + k) % n]);
  return out;
}

bool same_direction(const EdgeLine& a, const EdgeLine& b) {
  return circular_distance(a.direction, b.direction) < 90.0;
}

CandidateEdge merge_edges(const CandidateEdge& a, const CandidateEdge& b, std::size_t n,
                          std::span<const Point2> samples) {
  CandidateEdge m = a;
  if (n > 0) {
    const std::size_t gap = gap_points(samples, a.span, b.span).size();
    m.span.length = std::min(n, a.span.length + gap + b.span.length);
  }
  m.points.insert(m.points.end(), b.points.begin(), b.points.end());
  m.is_structure = a.is_structure || b.is_structure;
  m.line = fit_line_fixed_slope(m.points, m.absolute_angle);
  return m;
}

EdgeLine biased(EdgeLine line) {
  const Point2 nrm = line.unit_normal();
  const double shift = 0.5 * std::max(std::fabs(nrm.x), std::fabs(nrm.y));
  line.normal_offset -= shift;
  line.anchor -= nrm * shift;
  return line;
}

bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
    const double v = cross(q - p, r - p);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

double energy(const ContourAngleSignal& signal, const StructureAngleSet& structure) {
  const AngleHistogram hist = angle_histogram(signal);
  double mass = 0.0;
  for (int a : structure.angles) mass += hist[a];
  return std::clamp(1.0 - mass, 0.0, 1.0);
}

Segmentation segment_edges(const ContourAngleSignal& signal, const StructureAngleSet& structure,
                           const RefineParams& params) {
  const std::size_t n = signal.size();
  if (n < 3)
    throw Error(ErrorCode::DegenerateComponent, "angle signal shorter than 3 samples");

  std::vector<int> bins(n);
  for (std::size_t i = 0; i < n; ++i) bins[i] = angle_bin(signal.thetas[i]);

  // Runs as (start, length), circular.
  std::vector<IndexSpan> runs;
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (bins[i] != bins[(i + n - 1) % n]) {
      first = i;
      break;
    }
  if (first == n) {
    runs.push_back({0, n});
  } else {
    std::size_t start = first;
    std::size_t length = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t i = (first + k) % n;
      if (k < n && bins[i] == bins[(i + n - 1) % n]) {
        ++length;
      } else {
        runs.push_back({start, length});
        start = i;
        length = 1;
      }
    }
  }

  Segmentation seg;
  const std::size_t min_run = static_cast<std::size_t>(std::max(1, params.min_run));
  for (const IndexSpan& run : runs) {
    if (run.length < min_run) continue;
    CandidateEdge e;
    e.span = run;
    double sum = 0.0;
    for (std::size_t k = 0; k < run.length; ++k) {
      const std::size_t i = run.start + k;
      sum += signal.unwrapped(static_cast<std::ptrdiff_t>(i));
      e.points.push_back(signal.samples[i % n].midpoint);
    }
    e.rga_angle = normalize_degrees(sum / static_cast<double>(run.length));
    e.absolute_angle = normalize_degrees(signal.base_orientation + e.rga_angle);
    e.is_structure =
        distance_to_set(e.rga_angle, structure.angles) <= params.structure_tolerance + kTieEpsilon;
    seg.edges.push_back(std::move(e));
  }
  std::sort(seg.edges.begin(), seg.edges.end(),
            [](const CandidateEdge& a, const CandidateEdge& b) { return a.span.start < b.span.start; });

  std::vector<std::size_t> structure_idx;
  for (std::size_t k = 0; k < seg.edges.size(); ++k)
    if (seg.edges[k].is_structure) structure_idx.push_back(k);
  if (structure_idx.empty())
    throw Error(ErrorCode::NoStructureEdges, "no run matches the structure angle set");
  if (structure_idx.size() == 1 && seg.edges[structure_idx[0]].span.length == n) return seg;

  for (std::size_t k = 0; k < structure_idx.size(); ++k) {
    const CandidateEdge& a = seg.edges[structure_idx[k]];
    const CandidateEdge& b = seg.edges[structure_idx[(k + 1) % structure_idx.size()]];
    TransitionSignal t;
    t.signal_size = n;
    t.span.start = a.span.end(n);
    t.span.length = (b.span.start + n - t.span.start) % n;
    std::vector<bool> in_candidate(t.span.length, false);
    for (std::size_t e = 0; e < seg.edges.size(); ++e) {
      const CandidateEdge& c = seg.edges[e];
      if (c.is_structure || t.span.length == 0) continue;
      const std::size_t offset = (c.span.start + n - t.span.start) % n;
      if (offset + c.span.length > t.span.length) continue;
      t.edges.push_back(e);
      for (std::size_t q = 0; q < c.span.length; ++q) in_candidate[offset + q] = true;
    }
    for (std::size_t q = 0; q < t.span.length; ++q)
      (in_candidate[q] ? t.candidate_points : t.transition_points).push_back((t.span.start + q) % n);
    seg.transitions.push_back(std::move(t));
  }
  return seg;
}

bool has_edge_support(std::span<const Point2> points, const EdgeMap& edges, int probe_radius) {
  const int r = std::max(0, probe_radius);
  for (const Point2& p : points) {
    const int cx = static_cast<int>(std::lround(p.x));
    const int cy = static_cast<int>(std::lround(p.y));
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (edges.bits.in_bounds(cx + dx, cy + dy) && edges.bits(cx + dx, cy + dy)) return true;
  }
  return false;
}

TransitionSignal filter_noise_edges(const TransitionSignal& transition,
                                    std::vector<CandidateEdge>& edges, const EdgeMap& edge_map,
                                    int probe_radius) {
  TransitionSignal out = transition;
  const std::size_t n = std::max<std::size_t>(1, transition.signal_size);
  for (std::size_t idx : transition.edges) {
    CandidateEdge& e = edges.at(idx);
    e.trusted = has_edge_support(e.points, edge_map, probe_radius);
    if (e.trusted) continue;
    auto moved = [&](std::size_t i) { return e.span.contains(i, n); };
    for (std::size_t i : out.candidate_points)
      if (moved(i)) out.transition_points.push_back(i);
    std::erase_if(out.candidate_points, moved);
  }
  // Keep the transition set in contour order.
  const std::size_t start = out.span.start;
  std::sort(out.transition_points.begin(), out.transition_points.end(),
            [&](std::size_t a, std::size_t b) { return (a + n - start) % n < (b + n - start) % n; });
  return out;
}

int nearest_structure_angle(double angle, std::span<const int> angles) {
  if (angles.empty()) throw Error(ErrorCode::InvalidConfig, "empty structure angle set");
  int best = angles[0];
  double best_d = circular_distance(angle, best);
  for (int a : angles.subspan(1)) {
    const double d = circular_distance(angle, a);
    if (d < best_d - kTieEpsilon || (std::fabs(d - best_d) <= kTieEpsilon && a < best)) {
      best = a;
      best_d = d;
    }
  }
  return best;
}

CandidateEdge quantize_edge_angle(CandidateEdge edge, const StructureAngleSet& structure,
                                  double base_orientation) {
  edge.rga_angle = nearest_structure_angle(edge.rga_angle, structure.angles);
  edge.absolute_angle = normalize_degrees(base_orientation + edge.rga_angle);
  return edge;
}

EdgeLine fit_line_fixed_slope(std::span<const Point2> points, double gradient_angle) {
  if (points.empty()) throw Error(ErrorCode::TooFewEdges, "cannot fit a line to zero points");
  EdgeLine line;
  line.direction = normalize_degrees(gradient_angle - 90.0);
  const Point2 nrm = line.unit_normal();
  Point2 centroid;
  for (const Point2& p : points) centroid += p;
  centroid *= 1.0 / static_cast<double>(points.size());
  // With the direction fixed, the mean projection minimises the squared
  // perpendicular residuals.
  line.normal_offset = dot(centroid, nrm);
  line.anchor = centroid;
  return line;
}

std::vector<CandidateEdge> fit_structure_lines(std::vector<CandidateEdge> edges,
                                               const StructureAngleSet& structure,
                                               double base_orientation) {
  for (CandidateEdge& e : edges) {
    if (!e.is_structure) continue;
    e = quantize_edge_angle(std::move(e), structure, base_orientation);
    e.line = fit_line_fixed_slope(e.points, e.absolute_angle);
  }
  return edges;
}

bool are_parallel(const EdgeLine& a, const EdgeLine& b, double epsilon) {
  const double d = std::fmod(std::fabs(a.direction - b.direction), 180.0);
  return std::min(d, 180.0 - d) < epsilon;
}

Point2 intersect_lines(const EdgeLine& a, const EdgeLine& b, double parallel_epsilon) {
  if (are_parallel(a, b, parallel_epsilon))
    throw Error(ErrorCode::NearParallel, "lines at " + std::to_string(a.direction) + " and " +
                                             std::to_string(b.direction) + " degrees");
  // Homogeneous lines (nx, ny, -offset); their cross product is the meet.
  const Point2 na = a.unit_normal();
  const Point2 nb = b.unit_normal();
  const double w = na.x * nb.y - na.y * nb.x;
  const double x = (a.normal_offset * nb.y - b.normal_offset * na.y) / w;
  const double y = (na.x * b.normal_offset - nb.x * a.normal_offset) / w;
  return {x, y};
}

CandidateEdge parallel_bridge(const CandidateEdge& e1, const CandidateEdge& e2,
                              std::span<const Point2> transition,
                              const StructureAngleSet& structure, double base_orientation,
                              const RefineParams& params) {
  if (!e1.line || !e2.line || e1.points.empty() || e2.points.empty())
    throw std::invalid_argument("parallel_bridge needs fitted edges with points");
  const EdgeLine& l1 = *e1.line;
  const EdgeLine& l2 = *e2.line;
  if (!are_parallel(l1, l2, params.parallel_epsilon))
    throw std::invalid_argument("parallel_bridge called on non-parallel edges");

  const Point2 along = l1.unit_direction();
  const Point2 nrm = l1.unit_normal();
  const double v1 = l1.normal_offset;
  const double v2 = dot(l2.anchor, nrm);
  if (std::fabs(v2 - v1) < params.collinear_tolerance)
    throw Error(ErrorCode::DegenerateGap, "parallel edges are collinear");
  const double lateral_sign = v2 > v1 ? 1.0 : -1.0;

  // closest pair, e1 scanned backwards
  Point2 ci = e1.points.back(), cj = e2.points.front();
  double best = std::numeric_limits<double>::infinity();
  for (auto it = e1.points.rbegin(); it != e1.points.rend(); ++it)
    for (const Point2& q : e2.points) {
      const Point2& p = *it;
      const double d = distance(p, q);
      if (d < best) {
        best = d;
        ci = p;
        cj = q;
      }
    }
  const double ui = dot(ci, along);
  const double uj = dot(cj, along);
  const double lo = std::min(ui, uj);
  const double hi = std::max(ui, uj);
  const double quarter = 0.25 * (hi - lo);

  std::vector<Point2> pts;
  for (const Point2& t : transition) {
    const double u = dot(t, along);
    if (u >= lo + quarter && u <= hi - quarter) pts.push_back(t);
  }

  Point2 axis;
  if (pts.size() >= 2) {
    Point2 c;
    for (const Point2& p : pts) c += p;
    c *= 1.0 / static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Point2& p : pts) {
      const Point2 d = p - c;
      sxx += d.x * d.x;
      sxy += d.x * d.y;
      syy += d.y * d.y;
    }
    const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    axis = {std::cos(phi), std::sin(phi)};
    if (dot(axis, nrm) * lateral_sign < 0.0) axis *= -1.0;
  } else {
    const double um = 0.5 * (ui + uj);
    const Point2 base = along * um;
    pts = {base + nrm * v1, base + nrm * (0.5 * (v1 + v2)), base + nrm * v2};
    axis = nrm * lateral_sign;
  }

  // Quantize the bridge's gradient angle among structure angles that are not
  // parallel to e1.
  const double relative = direction_degrees(axis) + 90.0 - base_orientation;
  std::vector<int> allowed;
  for (int a : structure.angles) {
    EdgeLine probe;
    probe.direction = normalize_degrees(base_orientation + a - 90.0);
    if (!are_parallel(probe, l1, params.parallel_epsilon)) allowed.push_back(a);
  }
  if (allowed.empty())
    throw Error(ErrorCode::DegenerateGap, "no structure angle crosses the parallel gap");

  CandidateEdge bridge;
  bridge.is_bridge = true;
  bridge.trusted = true;
  bridge.points = std::move(pts);
  bridge.rga_angle = nearest_structure_angle(relative, allowed);
  bridge.absolute_angle = normalize_degrees(base_orientation + bridge.rga_angle);
  bridge.line = fit_line_fixed_slope(bridge.points, bridge.absolute_angle);
  return bridge;
}

Assembly assemble_polygon(std::vector<CandidateEdge> chain, std::span<const Point2> samples,
                          const StructureAngleSet& structure, double base_orientation,
                          const RefineParams& params) {
  const std::size_t n = samples.size();
  for (const CandidateEdge& e : chain)
    if (!e.line) throw std::invalid_argument("assemble_polygon needs fitted lines");

  Assembly out;
  const std::size_t max_rounds = 4 * chain.size() + 16;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (chain.size() < 2)
      throw Error(ErrorCode::TooFewEdges, std::to_string(chain.size()) + " edge(s) left");

    // Collinear neighbours merge; opposite-facing collinear neighbours are a
    // zero-width spike and the shorter side is dropped.
    bool changed = false;
    for (std::size_t k = 0; k < chain.size() && !changed; ++k) {
      const std::size_t j = (k + 1) % chain.size();
      const EdgeLine& a = *chain[k].line;
      const EdgeLine& b = *chain[j].line;
      if (!are_parallel(a, b, params.parallel_epsilon)) continue;
      if (std::fabs(a.signed_distance(b.anchor)) >= params.collinear_tolerance) continue;
      if (same_direction(a, b)) {
        chain[k] = merge_edges(chain[k], chain[j], n, samples);
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(j));
        ++out.merges;
      } else {
        const std::size_t drop = chain[k].points.size() < chain[j].points.size() ? k : j;
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(drop));
        ++out.removed;
      }
      changed = true;
    }
    if (changed) continue;

    // candidate parallel to both neighbours: fold into the bridge
    for (std::size_t k = 0; k < chain.size() && chain.size() > 2 && !changed; ++k) {
      if (chain[k].is_structure) continue;
      const EdgeLine& prev = *chain[(k + chain.size() - 1) % chain.size()].line;
      const EdgeLine& next = *chain[(k + 1) % chain.size()].line;
      const EdgeLine& self = *chain[k].line;
      if (are_parallel(prev, self, params.parallel_epsilon) && same_direction(prev, self) &&
          are_parallel(self, next, params.parallel_epsilon) && same_direction(self, next)) {
        chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(k));
        ++out.removed;
        changed = true;
      }
    }
    if (changed) continue;

    // Ring: chain edges with bridges spliced between parallel neighbours.
    // owner[r] is the chain index, or for bridges the chain index before it.
    std::vector<CandidateEdge> ring;
    std::vector<std::size_t> owner;
    std::size_t bridges = 0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      ring.push_back(chain[k]);
      owner.push_back(k);
      const std::size_t j = (k + 1) % chain.size();
      if (are_parallel(*chain[k].line, *chain[j].line, params.parallel_epsilon)) {
        CandidateEdge bridge =
            parallel_bridge(chain[k], chain[j], gap_points(samples, chain[k].span, chain[j].span),
                            structure, base_orientation, params);
        if (n > 0) {
          bridge.span.start = chain[k].span.end(n);
          bridge.span.length = (chain[j].span.start + n - bridge.span.start) % n;
        }
        ring.push_back(std::move(bridge));
        owner.push_back(k);
        ++bridges;
      }
    }
    const std::size_t m = ring.size();
    if (m < 3) throw Error(ErrorCode::TooFewEdges, "fewer than 3 sides");

    std::vector<EdgeLine> lines;
    for (const CandidateEdge& e : ring) lines.push_back(params.outward_bias ? biased(*e.line) : *e.line);
    std::vector<Point2> vertices(m);
    for (std::size_t k = 0; k < m; ++k)
      vertices[k] = intersect_lines(lines[k], lines[(k + 1) % m], params.parallel_epsilon);

    // Side k runs from vertex k-1 to vertex k and must advance along its line.
    std::size_t worst = m;
    double worst_len = params.vertex_merge_distance;
    for (std::size_t k = 0; k < m; ++k) {
      const double len = dot(vertices[k] - vertices[(k + m - 1) % m], lines[k].unit_direction());
      if (len < worst_len) {
        worst_len = len;
        worst = k;
      }
    }
    if (worst == m) {
      out.polygon.vertices = std::move(vertices);
      out.polygon.refined = true;
      for (std::size_t k = 0; k < m; ++k) ring[k].line = lines[k];
      out.ring = std::move(ring);
      out.bridges = bridges;
      return out;
    }

    std::size_t drop = owner[worst];
    if (ring[worst].is_bridge) {
      const std::size_t next = (drop + 1) % chain.size();
      if (chain[next].points.size() < chain[drop].points.size()) drop = next;
    }
    chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(drop));
    ++out.removed;
  }
  throw Error(ErrorCode::TooFewEdges, "assembly did not converge");
}

RefineResult refine_component(const Contour& smoothed, const ContourAngleSignal& signal,
                              const StructureAngleSet& structure, const EdgeMap& edge_map,
                              const RefineParams& params) {
  RefineResult result;
  result.polygon.vertices = smoothed.points;
  result.polygon.refined = false;
  const double base = signal.base_orientation;

  try {
    result.segmentation = segment_edges(signal, structure, params);
    Segmentation& seg = result.segmentation;
    for (TransitionSignal& t : seg.transitions)
      t = filter_noise_edges(t, seg.edges, edge_map, params.probe_radius);

    std::vector<bool> in_transition(seg.edges.size(), false);
    for (const TransitionSignal& t : seg.transitions)
      for (std::size_t idx : t.edges) in_transition[idx] = true;

    seg.edges = fit_structure_lines(std::move(seg.edges), structure, base);
    std::vector<CandidateEdge> chain;
    for (std::size_t k = 0; k < seg.edges.size(); ++k) {
      CandidateEdge& e = seg.edges[k];
      if (!e.is_structure) {
        if (!in_transition[k] || !e.trusted) continue;
        e = quantize_edge_angle(std::move(e), structure, base);
        e.line = fit_line_fixed_slope(e.points, e.absolute_angle);
      }
      chain.push_back(e);
    }

    result.assembly = assemble_polygon(std::move(chain), sample_midpoints(signal), structure, base,
                                       params);
    const auto& vertices = result.assembly.polygon.vertices;
    if (signed_area(vertices) <= 0.0) {
      result.failure = "InvalidPolygon: orientation flipped";
      return result;
    }
    if (!is_simple_polygon(vertices)) {
      result.failure = "InvalidPolygon: self-intersecting";
      return result;
    }
    result.polygon = result.assembly.polygon;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NoStructureEdges:
      case ErrorCode::TooFewEdges:
      case ErrorCode::DegenerateGap:
      case ErrorCode::NearParallel:
        result.failure = std::string(to_string(e.code()));
        result.polygon.vertices = smoothed.points;
        result.polygon.refined = false;
        return result;
      default:
        throw;
    }
  }
  return result;
}

double max_structure_deviation(const Polygon& polygon, std::span<const double> absolute_angles) {
  const auto& v = polygon.vertices;
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Point2 side = v[(k + 1) % v.size()] - v[k];
    const double gradient = direction_degrees(side) + 90.0;
    double best = std::numeric_limits<double>::infinity();
    for (double a : absolute_angles) best = std::min(best, circular_distance(gradient, a));
    worst = std::max(worst, best);
  }
  return worst;
}

bool is_simple_polygon(std::span<const Point2> vertices) {
  const std::size_t m = vertices.size();
  if (m < 3) return false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (j == i + 1 || (i == 0 && j == m - 1)) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % m], vertices[j], vertices[(j + 1) % m]))
        return false;
    }
  }
  return true;
}

}  // namespace rgapoly
