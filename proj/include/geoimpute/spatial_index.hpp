#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geoimpute/core_model.hpp"

namespace geoimpute {

/// Static 2-d tree (median split on the wider axis) answering exact k-nearest
/// queries. Ties at equal distance go to the lower ingestion index, so results
/// match a brute-force scan element for element.
///
/// The tree copies the coordinates it needs; it does not reference the
/// SampleSet after construction. Immutable, so concurrent queries are safe.
class KdTree {
 public:
  static constexpr std::size_t kLeafSize = 16;

  explicit KdTree(const SampleSet& samples);

  std::size_t size() const noexcept { return ids_.size(); }

  /// The k nearest samples, ascending by (distance, ingestion index).
  LocalNeighborhood query(const QueryPoint& q, std::size_t k) const;

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    std::uint8_t axis = 0;
  };

  struct Candidate {
    double d2;
    std::size_t id;    // ingestion index, the tie-breaker
    std::size_t slot;  // position in tree order
    bool operator<(const Candidate& o) const noexcept {
      return d2 < o.d2 || (d2 == o.d2 && id < o.id);
    }
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, double qx, double qy, std::size_t k,
              std::vector<Candidate>& heap) const;

  std::vector<Node> nodes_;
  // Structure-of-arrays copy of the samples, permuted into tree order.
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> values_;
  std::vector<std::size_t> ids_;
};

KdTree build_index(const SampleSet& samples);

LocalNeighborhood query_knn(const KdTree& index, const QueryPoint& q, std::size_t k);

}  // namespace geoimpute
