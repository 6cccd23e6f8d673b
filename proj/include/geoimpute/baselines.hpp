#pragma once

#include "geoimpute/adaptive_shape.hpp"
#include "geoimpute/core_model.hpp"

namespace geoimpute {

/// Inverse-distance exponents for the adaptive IDW baseline.
using PowerLevels = FiveLevels<struct PowerLevelTag>;

inline PowerLevels default_power_levels() { return PowerLevels({1.0, 1.5, 2.0, 2.5, 3.0}); }

/// Unweighted mean of the neighbor values.
double knn_estimate(const LocalNeighborhood& nbhd);

/// Same five-level schedule as the RBF shape factor.
double adaptive_power(double mu, const PowerLevels& levels);

/// Inverse-distance weighted mean with weights d^-alpha. A neighbor closer
/// than `snap_distance` is returned directly.
double aidw_estimate(const LocalNeighborhood& nbhd, const QueryPoint& q, double alpha,
                     double snap_distance = 0.0);

}  // namespace geoimpute
