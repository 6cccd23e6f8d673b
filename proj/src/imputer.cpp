#include "geoimpute/imputer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "geoimpute/diagnostics.hpp"

namespace geoimpute {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) {
    warning_handler()(message);
  } else {
    std::cerr << "geoimpute: warning: " << message << '\n';
  }
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  return std::exchange(warning_handler(), std::move(handler));
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Rbf: return "rbf";
    case Method::Knn: return "knn";
    case Method::Aidw: return "aidw";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "rbf") return Method::Rbf;
  if (name == "knn") return Method::Knn;
  if (name == "aidw") return Method::Aidw;
  throw Error(ErrorCode::UnknownKind, "unknown method '" + std::string(name) + "'");
}

ImputationContext::ImputationContext(const SampleSet& samples, EstimatorSettings settings)
    : samples_(&samples),
      settings_(std::move(settings)),
      index_(samples),
      k_(std::min(settings_.n_loc, samples.count())),
      d_exp_(geoimpute::expected_density(samples)),
      snap_distance_(settings_.snap_tolerance * samples.bbox().max_extent()) {
  if (settings_.n_loc == 0) throw Error(ErrorCode::InvalidArgument, "n_loc must be at least 1");
  if (!(settings_.snap_tolerance >= 0.0) || !std::isfinite(settings_.snap_tolerance)) {
    throw Error(ErrorCode::InvalidArgument, "snap tolerance must be finite and non-negative");
  }
  if (k_clamped()) {
    warn("only " + std::to_string(samples.count()) + " known samples; using k = " +
         std::to_string(k_) + " instead of " + std::to_string(settings_.n_loc));
  }
  if (settings_.shape_levels) {
    shape_levels_ = settings_.shape_levels;
  } else if (samples.count() >= 2) {
    shape_levels_ = default_levels(d_exp_);
  }
}

PointEstimate impute_point(const ImputationContext& ctx, const QueryPoint& q) {
  const LocalNeighborhood nbhd = ctx.index().query(q, ctx.k());
  PointEstimate est;
  const Neighbor& nearest = nbhd.neighbors.front();
  if (nearest.distance < ctx.snap_distance() || nearest.distance == 0.0) {
    est.value = nearest.point.value;
    est.snapped = true;
    est.mu = est.parameter = kNaN;
    return est;
  }
  if (!ctx.shape_levels()) {
    throw Error(ErrorCode::EmptyInput,
                "automatic shape levels need at least 2 samples; pass explicit levels");
  }
  const DensityStatistic density = measure_density(nbhd, ctx.expected_density(),
                                                   ctx.samples().bbox());
  const double c = shape_factor(density.mu, *ctx.shape_levels());
  const RbfCoefficients coeffs = solve_system(assemble_system(nbhd, c));
  est.value = evaluate_interpolant(coeffs, q);
  est.mu = density.mu;
  est.parameter = c;
  est.condition_estimate = coeffs.condition_estimate;
  return est;
}

PointEstimate estimate_point(const ImputationContext& ctx, const QueryPoint& q, Method method) {
  if (method == Method::Rbf) return impute_point(ctx, q);

  const LocalNeighborhood nbhd = ctx.index().query(q, ctx.k());
  const DensityStatistic density = measure_density(nbhd, ctx.expected_density(),
                                                   ctx.samples().bbox());
  PointEstimate est;
  est.mu = density.mu;
  if (method == Method::Knn) {
    est.value = knn_estimate(nbhd);
    est.parameter = static_cast<double>(nbhd.size());
    return est;
  }
  const double alpha = adaptive_power(density.mu, ctx.settings().power_levels);
  est.value = aidw_estimate(nbhd, q, alpha, ctx.snap_distance());
  est.parameter = alpha;
  const double nearest = nbhd.neighbors.front().distance;
  est.snapped = nearest < ctx.snap_distance() || nearest == 0.0;
  return est;
}

std::size_t resolve_workers(std::size_t requested) noexcept {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

BatchResult impute_batch(const ImputationContext& ctx, std::span<const QueryPoint> queries,
                         Method method, const BatchOptions& options) {
  BatchResult result;
  result.estimates.resize(queries.size());
  result.workers = std::min(resolve_workers(options.workers),
                            std::max<std::size_t>(1, queries.size()));

  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::vector<std::vector<PointFailure>> failures(result.workers);

  auto work = [&](std::size_t worker) {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= queries.size()) return;
      const std::size_t end = std::min(begin + kChunk, queries.size());
      for (std::size_t i = begin; i < end; ++i) {
        try {
          result.estimates[i] = estimate_point(ctx, queries[i], method);
        } catch (const Error& e) {
          result.estimates[i] = PointEstimate{kNaN, false, kNaN, kNaN, 0.0};
          failures[worker].push_back(PointFailure{i, e.code(), e.what()});
        }
      }
    }
  };

  if (result.workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(result.workers);
    for (std::size_t w = 0; w < result.workers; ++w) pool.emplace_back(work, w);
  }

  for (auto& f : failures) {
    result.failures.insert(result.failures.end(), std::make_move_iterator(f.begin()),
                           std::make_move_iterator(f.end()));
  }
  std::sort(result.failures.begin(), result.failures.end(),
            [](const PointFailure& a, const PointFailure& b) { return a.index < b.index; });
  for (const auto& est : result.estimates) {
    if (est.ill_conditioned()) ++result.ill_conditioned;
  }

  if (!options.continue_on_error && !result.failures.empty()) {
    const auto& first = result.failures.front();
    throw Error(first.code, "point " + std::to_string(first.index) + ": " + first.message);
  }
  if (result.ill_conditioned > 0) {
    warn(std::to_string(result.ill_conditioned) +
         " local systems had condition estimates above 1e12");
  }
  return result;
}

}  // namespace geoimpute
