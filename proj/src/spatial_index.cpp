#include "geoimpute/spatial_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "geoimpute/error.hpp"
#include "geoimpute/simd.hpp"

namespace geoimpute {

KdTree::KdTree(const SampleSet& samples) {
  const std::size_t n = samples.count();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "cannot index an empty sample set");
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "sample set too large for the spatial index");
  }
  ids_.resize(n);
  std::iota(ids_.begin(), ids_.end(), std::size_t{0});
  xs_.resize(n);
  ys_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = samples[i].x;
    ys_[i] = samples[i].y;
  }
  nodes_.reserve(2 * (n / kLeafSize + 1));
  build(0, static_cast<std::uint32_t>(n));

  // Permute coordinates into tree order for contiguous leaf scans.
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = samples[ids_[i]];
    xs_[i] = p.x;
    ys_[i] = p.y;
    values_[i] = p.value;
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto node_index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{0.0, begin, end, -1, -1, 0});
  if (end - begin <= kLeafSize) return node_index;

  // ids_ is permuted during the build; coordinates are looked up by id.
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (std::uint32_t i = begin; i < end; ++i) {
    const std::size_t id = ids_[i];
    x_min = std::min(x_min, xs_[id]);
    x_max = std::max(x_max, xs_[id]);
    y_min = std::min(y_min, ys_[id]);
    y_max = std::max(y_max, ys_[id]);
  }
  const std::uint8_t axis = (y_max - y_min) > (x_max - x_min) ? 1 : 0;
  const std::vector<double>& coord = axis == 0 ? xs_ : ys_;

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     return coord[a] < coord[b] || (coord[a] == coord[b] && a < b);
                   });
  const double split = coord[ids_[mid]];

  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(node_index)];
  node.split = split;
  node.axis = axis;
  node.left = left;
  node.right = right;
  return node_index;
}

void KdTree::search(std::int32_t node_index, double qx, double qy, std::size_t k,
                    std::vector<Candidate>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_index)];
  if (node.left < 0) {
    const std::size_t count = node.end - node.begin;
    std::array<double, kLeafSize> d2{};
    simd::squared_distances(qx, qy, std::span(xs_).subspan(node.begin, count),
                            std::span(ys_).subspan(node.begin, count),
                            std::span(d2).first(count));
    for (std::size_t i = 0; i < count; ++i) {
      const Candidate c{d2[i], ids_[node.begin + i], node.begin + i};
      if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end());
      } else if (c < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }

  // Left holds coordinates <= split, right holds coordinates >= split.
  const double diff = (node.axis == 0 ? qx : qy) - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, qx, qy, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().d2) search(far, qx, qy, k, heap);
}

LocalNeighborhood KdTree::query(const QueryPoint& q, std::size_t k) const {
  if (ids_.empty()) throw Error(ErrorCode::EmptyInput, "spatial index is empty");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (k > ids_.size()) {
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds the " +
                                          std::to_string(ids_.size()) + " indexed samples");
  }

  std::vector<Candidate> heap;
  heap.reserve(k);
  search(0, q.x, q.y, k, heap);
  std::sort_heap(heap.begin(), heap.end());

  LocalNeighborhood result;
  result.neighbors.reserve(k);
  for (const auto& c : heap) {
    const SamplePoint p{xs_[c.slot], ys_[c.slot], values_[c.slot]};
    result.neighbors.push_back(Neighbor{p, std::sqrt(c.d2), c.id});
  }
  auto& box = result.local_bbox;
  box = BoundingBox{result.neighbors[0].point.x, result.neighbors[0].point.x,
                    result.neighbors[0].point.y, result.neighbors[0].point.y};
  for (const auto& nb : result.neighbors) {
    box.x_min = std::min(box.x_min, nb.point.x);
    box.x_max = std::max(box.x_max, nb.point.x);
    box.y_min = std::min(box.y_min, nb.point.y);
    box.y_max = std::max(box.y_max, nb.point.y);
  }
  return result;
}

KdTree build_index(const SampleSet& samples) { return KdTree(samples); }

LocalNeighborhood query_knn(const KdTree& index, const QueryPoint& q, std::size_t k) {
  return index.query(q, k);
}

}  // namespace geoimpute
