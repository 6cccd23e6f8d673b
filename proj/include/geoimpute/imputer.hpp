#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoimpute/adaptive_shape.hpp"
#include "geoimpute/baselines.hpp"
#include "geoimpute/core_model.hpp"
#include "geoimpute/error.hpp"
#include "geoimpute/rbf_core.hpp"
#include "geoimpute/spatial_index.hpp"

namespace geoimpute {

enum class Method { Rbf, Knn, Aidw };

std::string_view to_string(Method method) noexcept;
/// Accepts "rbf", "knn", "aidw"; throws UnknownKind otherwise.
Method parse_method(std::string_view name);

struct EstimatorSettings {
  std::size_t n_loc = 20;
  std::optional<ShapeFactorLevels> shape_levels;  // nullopt: default_levels()
  PowerLevels power_levels = default_power_levels();
  double snap_tolerance = 1e-12;  // relative to the largest global bbox extent
};

/// Everything derived once per dataset: the spatial index, the expected
/// density and the resolved parameter levels. Read-only after construction,
/// so any number of workers can impute against it.
class ImputationContext {
 public:
  ImputationContext(const SampleSet& samples, EstimatorSettings settings);

  const SampleSet& samples() const noexcept { return *samples_; }
  const KdTree& index() const noexcept { return index_; }
  const EstimatorSettings& settings() const noexcept { return settings_; }

  /// n_loc clamped to the number of samples.
  std::size_t k() const noexcept { return k_; }
  bool k_clamped() const noexcept { return k_ < settings_.n_loc; }
  double expected_density() const noexcept { return d_exp_; }
  double snap_distance() const noexcept { return snap_distance_; }
  /// nullopt when there are too few samples for automatic levels.
  const std::optional<ShapeFactorLevels>& shape_levels() const noexcept { return shape_levels_; }

 private:
  const SampleSet* samples_;
  EstimatorSettings settings_;
  KdTree index_;
  std::size_t k_;
  double d_exp_;
  double snap_distance_;
  std::optional<ShapeFactorLevels> shape_levels_;
};

struct PointEstimate {
  double value = 0.0;
  bool snapped = false;  // query coincided with a known sample
  // Diagnostics; NaN where the method does not use them or the point snapped.
  double mu = 0.0;
  double parameter = 0.0;  // shape factor c (rbf), exponent alpha (aidw), k (knn)
  double condition_estimate = 0.0;
  bool ill_conditioned() const noexcept { return condition_estimate > kIllConditionedThreshold; }
};

/// Adaptive RBF estimate: neighbors, snap check, density membership, shape
/// factor, local solve, evaluation.
PointEstimate impute_point(const ImputationContext& ctx, const QueryPoint& q);

PointEstimate estimate_point(const ImputationContext& ctx, const QueryPoint& q, Method method);

struct PointFailure {
  std::size_t index = 0;
  ErrorCode code = ErrorCode::SingularSystem;
  std::string message;
};

struct BatchResult {
  std::vector<PointEstimate> estimates;  // one per query; value NaN where failed
  std::vector<PointFailure> failures;    // ascending by index
  std::size_t ill_conditioned = 0;
  std::size_t workers = 1;
};

struct BatchOptions {
  std::size_t workers = 1;  // 0: hardware concurrency
  bool continue_on_error = true;
};

/// Each query is independent; output i is bitwise the same as
/// estimate_point(ctx, queries[i], method) regardless of worker count. When
/// continue_on_error is false the lowest-index failure is rethrown.
BatchResult impute_batch(const ImputationContext& ctx, std::span<const QueryPoint> queries,
                         Method method, const BatchOptions& options = {});

std::size_t resolve_workers(std::size_t requested) noexcept;

}  // namespace geoimpute
