#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoimpute/core_model.hpp"
#include "geoimpute/imputer.hpp"

namespace geoimpute {

// ---------------------------------------------------------------------------
// Hold-out split
//
// The missing count is llround(fraction * N) (round half away from zero).
// Selection is a partial Fisher-Yates shuffle of the index array driven by
// std::mt19937_64 seeded with `seed`; step i swaps slot i with slot
// i + bounded(N - i), where bounded(n) draws raw 64-bit outputs, rejects those
// below (2^64 - n) mod n, and reduces the rest mod n. Both parts are reported
// in ingestion order. The procedure is fully specified, so splits reproduce
// across platforms.
// ---------------------------------------------------------------------------

struct HoldoutSplit {
  SampleSet known;
  std::vector<QueryPoint> missing;
  std::vector<double> truths;                  // true value per missing point
  std::vector<std::size_t> missing_indices;    // ingestion indices, ascending
  std::uint64_t seed = 0;
  double fraction = 0.0;
};

std::size_t holdout_count(std::size_t total, double fraction);

/// Indices selected as missing, ascending. Throws FractionOutOfRange.
std::vector<std::size_t> holdout_indices(std::size_t total, double fraction, std::uint64_t seed);

HoldoutSplit holdout_split(const SampleSet& samples, double fraction, std::uint64_t seed);

double rmse(std::span<const double> estimates, std::span<const double> truths);

// ---------------------------------------------------------------------------
// Synthetic surfaces
// ---------------------------------------------------------------------------

struct SurfaceSpec {
  enum class Kind { Constant, Ramp, Hills };
  Kind kind = Kind::Hills;
  double a = 0.0;  // constant value, or x slope
  double b = 0.0;  // y slope

  static SurfaceSpec constant(double v) { return {Kind::Constant, v, 0.0}; }
  static SurfaceSpec ramp(double ax, double by) { return {Kind::Ramp, ax, by}; }
  static SurfaceSpec hills() { return {Kind::Hills, 0.0, 0.0}; }
};

/// "constant[:v]", "ramp[:a,b]" or "hills"; throws UnknownKind.
SurfaceSpec parse_surface_spec(std::string_view text);
std::string to_string(const SurfaceSpec& spec);

/// Analytic surface value. Hills are a fixed Gaussian mixture laid out on
/// [0, extent]^2.
double surface_value(const SurfaceSpec& spec, double extent, double x, double y);

/// n points uniformly placed on [0, extent]^2 (std::mt19937_64, 53-bit
/// mantissa draws), valued by the surface.
SampleSet synth_surface(const SurfaceSpec& spec, double extent, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

struct BenchmarkOptions {
  double fraction = 0.1;
  std::uint64_t seed = 0;
  std::vector<Method> methods = {Method::Rbf, Method::Knn, Method::Aidw};
  EstimatorSettings settings;
  std::size_t workers = 1;
  bool keep_estimates = false;
};

struct MethodResult {
  std::string name;
  double rmse = 0.0;     // over successfully imputed points
  double seconds = 0.0;  // imputation loop wall clock
  std::size_t points = 0;
  std::size_t failures = 0;
  std::size_t ill_conditioned = 0;
  std::vector<double> estimates;  // per missing point, when requested
};

struct EvaluationReport {
  std::uint64_t seed = 0;
  double fraction = 0.0;
  std::size_t total = 0;
  std::size_t known = 0;
  std::size_t missing = 0;
  std::size_t workers = 1;
  std::size_t k = 0;
  double index_build_seconds = 0.0;
  std::optional<ShapeFactorLevels> shape_levels;  // resolved levels
  PowerLevels power_levels = default_power_levels();
  std::vector<MethodResult> results;  // sorted by name
  std::vector<QueryPoint> missing_points;
  std::vector<double> truths;
};

EvaluationReport run_benchmark(const SampleSet& samples, const BenchmarkOptions& options);

}  // namespace geoimpute
