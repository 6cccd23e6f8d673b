#include "geoimpute/baselines.hpp"

#include <cmath>

#include "geoimpute/error.hpp"

namespace geoimpute {

double knn_estimate(const LocalNeighborhood& nbhd) {
  if (nbhd.size() == 0) throw Error(ErrorCode::EmptyInput, "kNN estimate without neighbors");
  double sum = 0.0;
  for (const auto& nb : nbhd.neighbors) sum += nb.point.value;
  return sum / static_cast<double>(nbhd.size());
}

double adaptive_power(double mu, const PowerLevels& levels) {
  return five_level_schedule(mu, levels.values());
}

double aidw_estimate(const LocalNeighborhood& nbhd, const QueryPoint& /*q*/, double alpha,
                     double snap_distance) {
  if (nbhd.size() == 0) throw Error(ErrorCode::EmptyInput, "AIDW estimate without neighbors");
  double d_min = nbhd.neighbors[0].distance;
  for (const auto& nb : nbhd.neighbors) {
    if (nb.distance < d_min) d_min = nb.distance;
  }
  for (const auto& nb : nbhd.neighbors) {
    if (nb.distance < snap_distance || nb.distance == 0.0) return nb.point.value;
  }
  // Weights relative to the nearest distance: same ratios, no overflow for
  // tiny distances and exact invariance under uniform scaling. Summing
  // offsets from one neighbor's value keeps constant data exact.
  const double base = nbhd.neighbors[0].point.value;
  double num = 0.0;
  double den = 0.0;
  for (const auto& nb : nbhd.neighbors) {
    const double w = std::pow(d_min / nb.distance, alpha);
    num += w * (nb.point.value - base);
    den += w;
  }
  return base + num / den;
}

}  // namespace geoimpute
