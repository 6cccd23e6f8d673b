#include "geoimpute/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "geoimpute/error.hpp"

namespace geoimpute {

BoundingBox compute_bbox(std::span<const SamplePoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "bounding box of an empty point set");
  BoundingBox box{points[0].x, points[0].x, points[0].y, points[0].y};
  for (const auto& p : points.subspan(1)) {
    box.x_min = std::min(box.x_min, p.x);
    box.x_max = std::max(box.x_max, p.x);
    box.y_min = std::min(box.y_min, p.y);
    box.y_max = std::max(box.y_max, p.y);
  }
  return box;
}

double euclidean_distance(const QueryPoint& a, const SamplePoint& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<std::pair<std::size_t, std::size_t>> find_coincident(
    std::span<const SamplePoint> points, double tolerance) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    if (points[a].y != points[b].y) return points[a].y < points[b].y;
    return a < b;
  });

  // Union-find keyed by the smallest ingestion index of each cluster.
  std::vector<std::size_t> parent(points.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  // run_end[s]: first sorted position whose x differs from order[s]'s x.
  std::vector<std::size_t> run_end(order.size());
  for (std::size_t s = order.size(); s-- > 0;) {
    const bool same = s + 1 < order.size() && points[order[s + 1]].x == points[order[s]].x;
    run_end[s] = same ? run_end[s + 1] : s + 1;
  }

  // Sweep in x; candidates must lie within `tolerance` in x of each other.
  for (std::size_t s = 0; s < order.size(); ++s) {
    const auto& p = points[order[s]];
    std::size_t t = s + 1;
    while (t < order.size()) {
      const auto& q = points[order[t]];
      if (q.x - p.x > tolerance) break;
      if (q.x == p.x && q.y - p.y > tolerance) {
        t = run_end[t];
        continue;
      }
      if (std::abs(q.y - p.y) <= tolerance) {
        const std::size_t ra = find(order[s]);
        const std::size_t rb = find(order[t]);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
      ++t;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t root = find(i);
    if (root != i) pairs.emplace_back(root, i);
  }
  return pairs;
}

SampleSet::SampleSet(std::vector<SamplePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::EmptyInput, "sample set has no points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.value)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "sample " + std::to_string(i) + " has a non-finite coordinate or value");
    }
  }
  bbox_ = compute_bbox(points_);
  const auto dups = find_coincident(points_, coincidence_distance());
  if (!dups.empty()) {
    throw Error(ErrorCode::DuplicatePoint, "samples " + std::to_string(dups.front().first) +
                                               " and " + std::to_string(dups.front().second) +
                                               " share the same location");
  }
}

}  // namespace geoimpute
