#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "geoimpute/core_model.hpp"
#include "geoimpute/error.hpp"

namespace geoimpute {

/// Five strictly positive, finite parameter levels scheduled against the
/// density membership mu. Tagged so shape factors and IDW powers don't mix.
template <class Tag>
class FiveLevels {
 public:
  explicit FiveLevels(const std::array<double, 5>& levels) : levels_(levels) {
    for (double v : levels_) {
      if (!std::isfinite(v) || v <= 0.0) {
        throw Error(ErrorCode::InvalidLevels,
                    "parameter levels must be positive and finite, got " + std::to_string(v));
      }
    }
  }

  const std::array<double, 5>& values() const noexcept { return levels_; }
  double operator[](std::size_t i) const noexcept { return levels_[i]; }

  friend bool operator==(const FiveLevels&, const FiveLevels&) = default;

 private:
  std::array<double, 5> levels_;
};

using ShapeFactorLevels = FiveLevels<struct ShapeFactorTag>;

struct DensityStatistic {
  double d_exp = 0.0;    // points per squared coordinate unit, whole dataset
  double d_loc = 0.0;    // points per squared coordinate unit, neighborhood
  double d_ratio = 0.0;  // d_loc / d_exp
  double mu = 0.0;       // d_ratio mapped into [0, 1]
};

/// Relative floor applied to a zero (or vanishing) bounding-box extent.
inline constexpr double kDegenerateExtentFloor = 1e-12;

/// N / area of the tight global box.
double expected_density(const SampleSet& samples);

/// N_loc / area of the neighborhood's tight box. Extents are floored at
/// kDegenerateExtentFloor times the matching extent of `global`.
double local_density(const LocalNeighborhood& nbhd, const BoundingBox& global);

double density_statistic(double d_loc, double d_exp);

/// Cosine ramp: 0 below 0, 0.5 - 0.5 cos(pi/2 d) on [0, 2), 1 from 2 on.
double fuzzy_membership(double d_ratio) noexcept;

/// Piecewise-linear schedule through the knots (0.1, L1), (0.3, L2), ...,
/// (0.9, L5), flat outside [0.1, 0.9]. Throws MuOutOfRange outside [0, 1].
double five_level_schedule(double mu, const std::array<double, 5>& levels);

double shape_factor(double mu, const ShapeFactorLevels& levels);

/// Levels proportional to the expected spacing h = sqrt(1 / d_exp):
/// (0.2, 0.6, 1.0, 1.5, 2.0) * h.
ShapeFactorLevels default_levels(double d_exp);
ShapeFactorLevels default_levels(const SampleSet& samples);

/// Full density chain for one neighborhood.
DensityStatistic measure_density(const LocalNeighborhood& nbhd, double d_exp,
                                 const BoundingBox& global);

}  // namespace geoimpute
