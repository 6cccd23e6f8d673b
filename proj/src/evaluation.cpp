#include "geoimpute/evaluation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "geoimpute/error.hpp"

namespace geoimpute {
namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Hill {
  double cx, cy, sigma, amplitude;
};

// Unit-square layout, scaled by the extent.
constexpr std::array<Hill, 7> kHills{{
    {0.25, 0.30, 0.12, 800.0},
    {0.70, 0.65, 0.15, 600.0},
    {0.55, 0.20, 0.08, -300.0},
    {0.15, 0.80, 0.10, 400.0},
    {0.85, 0.15, 0.09, 350.0},
    {0.45, 0.55, 0.20, 250.0},
    {0.80, 0.85, 0.07, 300.0},
}};

bool parse_double(std::string_view text, double& out) {
  const std::string s(text);
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

std::size_t holdout_count(std::size_t total, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::FractionOutOfRange,
                "hold-out fraction must lie in (0, 1), got " + std::to_string(fraction));
  }
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

std::vector<std::size_t> holdout_indices(std::size_t total, double fraction, std::uint64_t seed) {
  const std::size_t m = holdout_count(total, fraction);
  if (m >= total) {
    throw Error(ErrorCode::FractionOutOfRange,
                "hold-out fraction " + std::to_string(fraction) + " leaves no known samples");
  }
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(bounded(rng, total - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

HoldoutSplit holdout_split(const SampleSet& samples, double fraction, std::uint64_t seed) {
  const auto missing = holdout_indices(samples.count(), fraction, seed);
  std::vector<SamplePoint> known;
  known.reserve(samples.count() - missing.size());
  std::vector<QueryPoint> queries;
  std::vector<double> truths;
  queries.reserve(missing.size());
  truths.reserve(missing.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < samples.count(); ++i) {
    const auto& p = samples[i];
    if (next < missing.size() && missing[next] == i) {
      queries.push_back({p.x, p.y});
      truths.push_back(p.value);
      ++next;
    } else {
      known.push_back(p);
    }
  }
  return HoldoutSplit{SampleSet(std::move(known)), std::move(queries), std::move(truths),
                      missing, seed, fraction};
}

double rmse(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size()) {
    throw Error(ErrorCode::LengthMismatch, "estimates and truths differ in length");
  }
  if (estimates.empty()) throw Error(ErrorCode::EmptyInput, "RMSE of an empty set");
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double e = estimates[i] - truths[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

SurfaceSpec parse_surface_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  auto bad = [&] {
    return Error(ErrorCode::UnknownKind, "unknown surface kind '" + std::string(text) + "'");
  };
  if (name == "hills" && args.empty()) return SurfaceSpec::hills();
  if (name == "constant") {
    double v = 0.0;
    if (args.empty()) return SurfaceSpec::constant(0.0);
    if (!parse_double(args, v)) throw bad();
    return SurfaceSpec::constant(v);
  }
  if (name == "ramp") {
    if (args.empty()) return SurfaceSpec::ramp(1.0, 1.0);
    const auto comma = args.find(',');
    double a = 0.0, b = 0.0;
    if (comma == std::string_view::npos || !parse_double(args.substr(0, comma), a) ||
        !parse_double(args.substr(comma + 1), b)) {
      throw bad();
    }
    return SurfaceSpec::ramp(a, b);
  }
  throw bad();
}

std::string to_string(const SurfaceSpec& spec) {
  switch (spec.kind) {
    case SurfaceSpec::Kind::Constant: return "constant:" + std::to_string(spec.a);
    case SurfaceSpec::Kind::Ramp: return "ramp:" + std::to_string(spec.a) + "," + std::to_string(spec.b);
    case SurfaceSpec::Kind::Hills: return "hills";
  }
  return "unknown";
}

double surface_value(const SurfaceSpec& spec, double extent, double x, double y) {
  switch (spec.kind) {
    case SurfaceSpec::Kind::Constant: return spec.a;
    case SurfaceSpec::Kind::Ramp: return spec.a * x + spec.b * y;
    case SurfaceSpec::Kind::Hills: {
      double z = 0.0;
      for (const auto& h : kHills) {
        const double dx = x / extent - h.cx;
        const double dy = y / extent - h.cy;
        z += h.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * h.sigma * h.sigma));
      }
      return z;
    }
  }
  return 0.0;
}

SampleSet synth_surface(const SurfaceSpec& spec, double extent, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "synthetic surface needs at least one point");
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::InvalidArgument, "extent must be positive and finite");
  }
  std::mt19937_64 rng(seed);
  std::vector<SamplePoint> pts(n);
  for (auto& p : pts) {
    p.x = unit_draw(rng) * extent;
    p.y = unit_draw(rng) * extent;
    p.value = surface_value(spec, extent, p.x, p.y);
  }
  return SampleSet(std::move(pts));
}

EvaluationReport run_benchmark(const SampleSet& samples, const BenchmarkOptions& options) {
  using Clock = std::chrono::steady_clock;
  const HoldoutSplit split = holdout_split(samples, options.fraction, options.seed);

  EvaluationReport report;
  report.seed = options.seed;
  report.fraction = options.fraction;
  report.total = samples.count();
  report.known = split.known.count();
  report.missing = split.missing.size();
  report.workers = resolve_workers(options.workers);
  report.power_levels = options.settings.power_levels;

  const auto t0 = Clock::now();
  const ImputationContext ctx(split.known, options.settings);
  report.index_build_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  report.k = ctx.k();
  report.shape_levels = ctx.shape_levels();

  std::vector<Method> methods = options.methods;
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return to_string(a) < to_string(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  // Methods run one after another so their timings don't interfere.
  for (const Method method : methods) {
    MethodResult row;
    row.name = std::string(to_string(method));
    const auto start = Clock::now();
    BatchResult batch = impute_batch(ctx, split.missing, method,
                                     BatchOptions{options.workers, true});
    row.seconds = std::max(std::chrono::duration<double>(Clock::now() - start).count(), 1e-9);
    row.failures = batch.failures.size();
    row.ill_conditioned = batch.ill_conditioned;

    std::vector<double> est, truth;
    est.reserve(split.missing.size());
    truth.reserve(split.missing.size());
    std::size_t f = 0;
    for (std::size_t i = 0; i < split.missing.size(); ++i) {
      if (f < batch.failures.size() && batch.failures[f].index == i) {
        ++f;
        continue;
      }
      est.push_back(batch.estimates[i].value);
      truth.push_back(split.truths[i]);
    }
    row.points = est.size();
    row.rmse = est.empty() ? std::numeric_limits<double>::quiet_NaN() : rmse(est, truth);
    if (options.keep_estimates) {
      row.estimates.reserve(batch.estimates.size());
      for (const auto& e : batch.estimates) row.estimates.push_back(e.value);
    }
    report.results.push_back(std::move(row));
  }
  if (options.keep_estimates) {
    report.missing_points = split.missing;
    report.truths = split.truths;
  }
  return report;
}

}  // namespace geoimpute
