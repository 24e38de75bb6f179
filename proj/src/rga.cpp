#include "rgapoly/rga.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace rgapoly {

namespace {

constexpr double kProbeDistance = 0.75;

double reduce_tangent(double deg) {
  // [0, 360) -> [-90, 90)
  double t = deg;
  while (t >= 90.0) t -= 180.0;
  while (t < -90.0) t += 180.0;
  return t;
}

}  // namespace

double ContourAngleSignal::unwrapped(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(thetas.size());
  std::ptrdiff_t wraps = i >= 0 ? i / n : -((-i + n - 1) / n);
  const std::ptrdiff_t j = i - wraps * n;
  return thetas[static_cast<std::size_t>(j)] + static_cast<double>(wraps) * closure;
}

std::vector<OrientedSample> tangent_samples(const Contour& contour, const ComponentMask* component,
                                            TangentDiagnostics* diagnostics) {
  const std::size_t n = contour.size();
  if (n < 3)
    throw Error(ErrorCode::DegenerateComponent,
                "need at least 3 contour points, got " + std::to_string(n));

  // Interior lies on the +90 side of travel for positively oriented contours.
  const double turn = signed_area(contour.points) >= 0.0 ? 90.0 : -90.0;

  std::vector<OrientedSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = contour.points[i];
    const Point2& b = contour.points[(i + 1) % n];
    const Point2 step = b - a;
    if (step.x == 0.0 && step.y == 0.0)
      throw Error(ErrorCode::ZeroLengthSegment, "repeated contour point at index " +
                                                    std::to_string(i));
    const double heading = direction_degrees(step);
    OrientedSample& s = samples[i];
    s.midpoint = (a + b) * 0.5;
    s.tangent = reduce_tangent(heading);
    s.inward = normalize_degrees(heading + turn);

    if (component) {
      const Point2 probe = s.midpoint + unit_vector(s.inward) * kProbeDistance;
      const bool inside = component->contains(static_cast<int>(std::lround(probe.x)),
                                              static_cast<int>(std::lround(probe.y)));
      if (!inside && diagnostics) ++diagnostics->probe_disagreements;
    }
  }
  return samples;
}

double angle_diff(double a, double b) {
  const double r = a - b;
  return r - 180.0 * std::floor((r + 90.0) / 180.0);
}

ContourAngleSignal rga_transform(std::span<const OrientedSample> samples,
                                 double closure_tolerance) {
  const std::size_t n = samples.size();
  if (n < 3)
    throw Error(ErrorCode::DegenerateComponent,
                "need at least 3 samples, got " + std::to_string(n));

  ContourAngleSignal signal;
  signal.samples.assign(samples.begin(), samples.end());
  signal.base_orientation = samples[0].inward;
  signal.thetas.resize(n);
  signal.thetas[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    signal.thetas[i] = signal.thetas[i - 1] + angle_diff(samples[i].inward, samples[i - 1].inward);
  signal.closure = signal.thetas[n - 1] + angle_diff(samples[0].inward, samples[n - 1].inward);

  if (std::fabs(signal.closure - 360.0) > closure_tolerance)
    throw Error(ErrorCode::ClosureViolation,
                "total turning " + std::to_string(signal.closure) + " is not within " +
                    std::to_string(closure_tolerance) + " of 360");
  return signal;
}

ContourAngleSignal median_filter_circular(const ContourAngleSignal& signal, int window) {
  if (window < 1 || window % 2 == 0)
    throw Error(ErrorCode::InvalidConfig,
                "median window must be odd and positive, got " + std::to_string(window));
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  if (window == 1 || n < window) return signal;

  const std::ptrdiff_t half = window / 2;
  ContourAngleSignal out = signal;
  std::vector<double> buf(static_cast<std::size_t>(window));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t k = -half; k <= half; ++k)
      buf[static_cast<std::size_t>(k + half)] = signal.unwrapped(i + k);
    std::nth_element(buf.begin(), buf.begin() + half, buf.end());
    out.thetas[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(half)];
  }
  return out;
}

void write_theta_csv(const std::filesystem::path& path, const ContourAngleSignal& signal) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "index,theta\n" << std::setprecision(10);
  for (std::size_t i = 0; i < signal.size(); ++i) out << i << "," << signal.thetas[i] << "\n";
}

}  // namespace rgapoly
