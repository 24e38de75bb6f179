#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "rgapoly/rga.hpp"

namespace rgapoly {

/// Boundary orientation relation set: integer degree offsets in (0, 360),
/// strictly increasing. Offset 0 (the initial angle) is implicit.
class BorSet {
 public:
  BorSet() = default;
  /// Sorts; throws InvalidConfig for offsets outside (0, 360) or duplicates.
  explicit BorSet(std::vector<int> relations);

  std::span<const int> relations() const noexcept { return relations_; }
  std::size_t size() const noexcept { return relations_.size(); }

  friend bool operator==(const BorSet&, const BorSet&) = default;

 private:
  std::vector<int> relations_;
};

/// Parses "90,180,270".
BorSet parse_bor_set(std::string_view text);

/// The orthogonal-building relation set {90, 180, 270}.
BorSet orthogonal_bor_set();

class BorsBank {
 public:
  /// Throws InvalidConfig when empty or when a set repeats.
  explicit BorsBank(std::vector<BorSet> sets);

  std::span<const BorSet> sets() const noexcept { return sets_; }

 private:
  std::vector<BorSet> sets_;
};

/// Contour angle distribution at 1-degree resolution.
struct AngleHistogram {
  std::array<double, 360> bins{};

  double operator[](int degree) const noexcept { return bins[static_cast<std::size_t>(((degree % 360) + 360) % 360)]; }
};

/// A relation set instantiated at its estimated initial angle. Angles are in
/// the relative (theta) frame: {alpha_hat} then {alpha_hat + s mod 360}.
struct StructureAngleSet {
  BorSet bor_set;
  int alpha_hat = 0;
  std::vector<int> angles;
  double likelihood = 0.0;

  /// Angles mapped to absolute gradient orientation through `base`.
  std::vector<double> absolute(double base_orientation) const;
};

StructureAngleSet make_structure_set(const BorSet& set, int alpha_hat, double likelihood);

/// Integer bin of an angle: mod 360, rounded to nearest, 360 folds to 0.
int angle_bin(double degrees);

AngleHistogram angle_histogram(std::span<const double> thetas);
AngleHistogram angle_histogram(const ContourAngleSignal& signal);

/// hist(alpha) + sum over s of hist(alpha + s).
double bors_likelihood(const AngleHistogram& hist, const BorSet& set, int alpha);

struct InitialAngle {
  int alpha = 0;
  double likelihood = 0.0;
};

/// Likelihoods within this of the maximum count as ties.
inline constexpr double kLikelihoodTieTolerance = 1e-12;

/// Maximum-likelihood alpha over the 360 integer candidates; ties go to the
/// smallest alpha.
InitialAngle estimate_initial_angle(const AngleHistogram& hist, const BorSet& set);

/// Best set of the bank; ties go to the earlier set.
StructureAngleSet select_bors(const AngleHistogram& hist, const BorsBank& bank);

}  // namespace rgapoly
