#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace geoimpute {

/// One observation: planar location plus a scalar value (e.g. elevation).
struct SamplePoint {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

/// A location whose value is to be estimated.
struct QueryPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const QueryPoint&, const QueryPoint&) = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double max_extent() const noexcept { return width() > height() ? width() : height(); }
  bool contains(double x, double y) const noexcept {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Relative tolerance under which two locations count as the same point.
inline constexpr double kCoincidenceTolerance = 1e-12;

BoundingBox compute_bbox(std::span<const SamplePoint> points);

double euclidean_distance(const QueryPoint& a, const SamplePoint& b) noexcept;

/// Pairs (first, later) of ingestion indices whose locations agree to within
/// `tolerance` on both axes. Each later index is reported once, against the
/// earliest point it coincides with.
std::vector<std::pair<std::size_t, std::size_t>> find_coincident(
    std::span<const SamplePoint> points, double tolerance);

/// The known-value points. Immutable; construction validates that the set is
/// non-empty, finite and free of coincident locations.
class SampleSet {
 public:
  explicit SampleSet(std::vector<SamplePoint> points);

  std::span<const SamplePoint> points() const noexcept { return points_; }
  const SamplePoint& operator[](std::size_t i) const noexcept { return points_[i]; }
  std::size_t count() const noexcept { return points_.size(); }
  const BoundingBox& bbox() const noexcept { return bbox_; }

  /// Absolute distance below which two locations are treated as identical.
  double coincidence_distance() const noexcept {
    return kCoincidenceTolerance * bbox_.max_extent();
  }

 private:
  std::vector<SamplePoint> points_;
  BoundingBox bbox_;
};

struct Neighbor {
  SamplePoint point;
  double distance = 0.0;
  std::size_t index = 0;  // ingestion index in the owning SampleSet
};

/// The k nearest known points to a query, ascending by (distance, index).
struct LocalNeighborhood {
  std::vector<Neighbor> neighbors;
  BoundingBox local_bbox;

  std::size_t size() const noexcept { return neighbors.size(); }
};

}  // namespace geoimpute
