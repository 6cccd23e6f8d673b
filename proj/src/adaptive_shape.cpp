#include "geoimpute/adaptive_shape.hpp"

#include <algorithm>
#include <numbers>

namespace geoimpute {
namespace {

double floored_extent(double extent, double global_extent, double global_max) {
  double floor = kDegenerateExtentFloor * global_extent;
  if (!(floor > 0.0)) floor = kDegenerateExtentFloor * global_max;
  if (!(floor > 0.0)) floor = kDegenerateExtentFloor;
  return std::max(extent, floor);
}

double box_area(const BoundingBox& box, const BoundingBox& global) {
  const double gmax = global.max_extent();
  return floored_extent(box.width(), global.width(), gmax) *
         floored_extent(box.height(), global.height(), gmax);
}

}  // namespace

double expected_density(const SampleSet& samples) {
  return static_cast<double>(samples.count()) / box_area(samples.bbox(), samples.bbox());
}

double local_density(const LocalNeighborhood& nbhd, const BoundingBox& global) {
  if (nbhd.size() == 0) throw Error(ErrorCode::EmptyInput, "local density of an empty neighborhood");
  return static_cast<double>(nbhd.size()) / box_area(nbhd.local_bbox, global);
}

double density_statistic(double d_loc, double d_exp) {
  if (!(d_exp > 0.0) || !std::isfinite(d_exp)) {
    throw Error(ErrorCode::NonPositiveExpectedDensity,
                "expected density must be positive, got " + std::to_string(d_exp));
  }
  return d_loc / d_exp;
}

double fuzzy_membership(double d_ratio) noexcept {
  if (!(d_ratio > 0.0)) return 0.0;
  if (d_ratio < 2.0) return 0.5 - 0.5 * std::cos(0.5 * std::numbers::pi * d_ratio);
  return 1.0;
}

double five_level_schedule(double mu, const std::array<double, 5>& levels) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw Error(ErrorCode::MuOutOfRange, "membership must lie in [0, 1], got " + std::to_string(mu));
  }
  if (mu <= 0.1) return levels[0];
  if (mu >= 0.9) return levels[4];
  const double pos = (mu - 0.1) / 0.2;
  const auto seg = std::min<std::size_t>(static_cast<std::size_t>(pos), 3);
  const double t = pos - static_cast<double>(seg);
  return levels[seg] * (1.0 - t) + levels[seg + 1] * t;
}

double shape_factor(double mu, const ShapeFactorLevels& levels) {
  return five_level_schedule(mu, levels.values());
}

ShapeFactorLevels default_levels(double d_exp) {
  if (!(d_exp > 0.0) || !std::isfinite(d_exp)) {
    throw Error(ErrorCode::NonPositiveExpectedDensity,
                "expected density must be positive, got " + std::to_string(d_exp));
  }
  const double h = std::sqrt(1.0 / d_exp);
  return ShapeFactorLevels({0.2 * h, 0.6 * h, 1.0 * h, 1.5 * h, 2.0 * h});
}

ShapeFactorLevels default_levels(const SampleSet& samples) {
  if (samples.count() < 2) {
    throw Error(ErrorCode::EmptyInput, "automatic shape levels need at least 2 samples");
  }
  return default_levels(expected_density(samples));
}

DensityStatistic measure_density(const LocalNeighborhood& nbhd, double d_exp,
                                 const BoundingBox& global) {
  DensityStatistic s;
  s.d_exp = d_exp;
  s.d_loc = local_density(nbhd, global);
  s.d_ratio = density_statistic(s.d_loc, d_exp);
  s.mu = fuzzy_membership(s.d_ratio);
  return s;
}

}  // namespace geoimpute
