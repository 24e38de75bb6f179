#include "rgapoly/bors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace rgapoly {

BorSet::BorSet(std::vector<int> relations) : relations_(std::move(relations)) {
  std::sort(relations_.begin(), relations_.end());
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const int s = relations_[i];
    if (s <= 0 || s >= 360)
      throw Error(ErrorCode::InvalidConfig,
                  "relation offset " + std::to_string(s) + " outside (0, 360)");
    if (i > 0 && relations_[i - 1] == s)
      throw Error(ErrorCode::InvalidConfig, "duplicate relation offset " + std::to_string(s));
  }
}

BorSet parse_bor_set(std::string_view text) {
  std::vector<int> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw Error(ErrorCode::InvalidConfig, "bad relation set '" + std::string(text) + "'");
    values.push_back(v);
    pos = comma + 1;
  }
  return BorSet(std::move(values));
}

BorSet orthogonal_bor_set() { return BorSet({90, 180, 270}); }

BorsBank::BorsBank(std::vector<BorSet> sets) : sets_(std::move(sets)) {
  if (sets_.empty()) throw Error(ErrorCode::InvalidConfig, "relation set bank is empty");
  for (std::size_t i = 0; i < sets_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (sets_[i] == sets_[j])
        throw Error(ErrorCode::InvalidConfig, "relation set bank repeats a set");
}

std::vector<double> StructureAngleSet::absolute(double base_orientation) const {
  std::vector<double> out;
  out.reserve(angles.size());
  for (int a : angles) out.push_back(normalize_degrees(base_orientation + a));
  return out;
}

StructureAngleSet make_structure_set(const BorSet& set, int alpha_hat, double likelihood) {
  StructureAngleSet out;
  out.bor_set = set;
  out.alpha_hat = ((alpha_hat % 360) + 360) % 360;
  out.likelihood = likelihood;
  out.angles.push_back(out.alpha_hat);
  for (int s : set.relations()) out.angles.push_back((out.alpha_hat + s) % 360);
  return out;
}

int angle_bin(double degrees) {
  const long bin = std::lround(normalize_degrees(degrees));
  return static_cast<int>(bin % 360);
}

AngleHistogram angle_histogram(std::span<const double> thetas) {
  AngleHistogram hist;
  if (thetas.empty()) return hist;
  std::array<std::size_t, 360> counts{};
  for (double t : thetas) ++counts[static_cast<std::size_t>(angle_bin(t))];
  const double n = static_cast<double>(thetas.size());
  for (std::size_t b = 0; b < 360; ++b) hist.bins[b] = static_cast<double>(counts[b]) / n;
  return hist;
}

AngleHistogram angle_histogram(const ContourAngleSignal& signal) {
  return angle_histogram(signal.thetas);
}

double bors_likelihood(const AngleHistogram& hist, const BorSet& set, int alpha) {
  double p = hist[alpha];
  for (int s : set.relations()) p += hist[alpha + s];
  return p;
}

InitialAngle estimate_initial_angle(const AngleHistogram& hist, const BorSet& set) {
  std::array<double, 360> score{};
  double best = -1.0;
  for (int a = 0; a < 360; ++a) {
    score[static_cast<std::size_t>(a)] = bors_likelihood(hist, set, a);
    best = std::max(best, score[static_cast<std::size_t>(a)]);
  }
  for (int a = 0; a < 360; ++a)
    if (score[static_cast<std::size_t>(a)] >= best - kLikelihoodTieTolerance)
      return {a, score[static_cast<std::size_t>(a)]};
  return {0, score[0]};
}

StructureAngleSet select_bors(const AngleHistogram& hist, const BorsBank& bank) {
  const BorSet* best_set = nullptr;
  InitialAngle best;
  for (const BorSet& set : bank.sets()) {
    const InitialAngle est = estimate_initial_angle(hist, set);
    if (!best_set || est.likelihood > best.likelihood + kLikelihoodTieTolerance) {
      best_set = &set;
      best = est;
    }
  }
  return make_structure_set(*best_set, best.alpha, best.likelihood);
}

}  // namespace rgapoly
