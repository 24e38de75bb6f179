#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "rgapoly/contour.hpp"
#include "rgapoly/geometry.hpp"
#include "rgapoly/raster.hpp"

namespace rgapoly {

/// Tangent and inward gradient angle at the midpoint of one contour step.
struct OrientedSample {
  Point2 midpoint;
  double tangent = 0.0;  ///< degrees in [-90, 90)
  double inward = 0.0;   ///< degrees in [0, 360), normal pointing into the mask
};

/// Contour in the relative gradient angle domain.
///
/// thetas[i] is the cumulative relative angle of sample i (thetas[0] == 0 on
/// construction). closure is the wrap-around continuation thetas[n], i.e. the
/// total turning. Absolute gradient angles are base_orientation + thetas[i].
struct ContourAngleSignal {
  std::vector<double> thetas;
  double base_orientation = 0.0;
  double closure = 0.0;
  std::vector<OrientedSample> samples;

  std::size_t size() const noexcept { return thetas.size(); }
  /// Circular access with the wrap-around unwrapped by `closure`.
  double unwrapped(std::ptrdiff_t i) const;
};

struct TangentDiagnostics {
  std::size_t probe_disagreements = 0;
};

/// One sample per circular pair (c_i, c_{i+1}). The inward side follows the
/// contour orientation; when `component` is given, each normal is probed
/// 0.75 px into the mask and disagreements are counted.
std::vector<OrientedSample> tangent_samples(const Contour& contour,
                                            const ComponentMask* component = nullptr,
                                            TangentDiagnostics* diagnostics = nullptr);

/// a - b shifted by a multiple of 180 into [-90, 90).
double angle_diff(double a, double b);

/// Default bound on |closure - 360| accepted by rga_transform.
inline constexpr double kClosureTolerance = 15.0;

/// Cumulative relative gradient angles. Throws ClosureViolation when the
/// total turning is further than `closure_tolerance` from +360.
ContourAngleSignal rga_transform(std::span<const OrientedSample> samples,
                                 double closure_tolerance = kClosureTolerance);

/// Centred circular median over the unwrapped cumulative values. Signals
/// shorter than the window pass through unchanged.
ContourAngleSignal median_filter_circular(const ContourAngleSignal& signal, int window);

/// CSV with header "index,theta".
void write_theta_csv(const std::filesystem::path& path, const ContourAngleSignal& signal);

}  // namespace rgapoly
