#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "geoimpute/diagnostics.hpp"
#include "geoimpute/imputer.hpp"
#include "geoimpute/simd.hpp"
#include "oracles.hpp"

using namespace geoimpute;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_estimate(const PointEstimate& a, const PointEstimate& b) {
  return same_bits(a.value, b.value) && same_bits(a.mu, b.mu) && same_bits(a.parameter, b.parameter) &&
         a.snapped == b.snapped && same_bits(a.condition_estimate, b.condition_estimate);
}

std::vector<QueryPoint> random_queries(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<QueryPoint> q(n);
  for (auto& p : q) p = {u(rng), u(rng)};
  return q;
}

struct CaptureWarnings {
  std::vector<std::string> messages;
  WarningHandler previous;
  CaptureWarnings() {
    previous = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~CaptureWarnings() { set_warning_handler(std::move(previous)); }
};

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("aidw") == Method::Aidw);
  CHECK(to_string(Method::Knn) == "knn");
  CHECK_THROWS_AS(parse_method("kriging"), Error);
}

TEST_CASE("query on a known point snaps to its value") {
  const auto pts = oracle::random_points(300, 100.0, 2);
  const SampleSet s(pts);
  const ImputationContext ctx(s, {});
  for (std::size_t i = 0; i < 300; i += 31) {
    const auto e = impute_point(ctx, {pts[i].x, pts[i].y});
    CHECK(e.snapped);
    CHECK(e.value == pts[i].value);
  }
}

TEST_CASE("four symmetric neighbors with equal values") {
  const double v = 12.5;
  const SampleSet s({{-1, -1, v}, {1, -1, v}, {-1, 1, v}, {1, 1, v}});
  CaptureWarnings warnings;
  const ImputationContext ctx(s, {});
  CHECK(ctx.k() == 4);
  CHECK(ctx.k_clamped());
  REQUIRE(warnings.messages.size() == 1);
  CHECK(warnings.messages[0].find("k = 4") != std::string::npos);

  // kNN and AIDW average equal values exactly.
  CHECK(estimate_point(ctx, {0, 0}, Method::Knn).value == v);
  CHECK(estimate_point(ctx, {0, 0}, Method::Aidw).value == doctest::Approx(v).epsilon(1e-15));

  // The pure multiquadric interpolant has no constant term: by symmetry all
  // four coefficients equal v / rowsum, so the center value is
  // v * 4 phi(sqrt 2) / (c + 2 phi(2) + phi(2 sqrt 2)).
  const auto e = impute_point(ctx, {0, 0});
  const double c = e.parameter;
  const double phi_center = std::sqrt(2.0 + c * c);
  const double rowsum = c + 2.0 * std::sqrt(4.0 + c * c) + std::sqrt(8.0 + c * c);
  CHECK(e.value == doctest::Approx(v * 4.0 * phi_center / rowsum).epsilon(1e-12));
  CHECK(e.mu >= 0.0);
  CHECK(e.mu <= 1.0);
}

TEST_CASE("planar ramp is recovered") {
  std::vector<SamplePoint> pts = oracle::random_points(1000, 1.0, 77);
  for (auto& p : pts) p.value = 2.0 * p.x + 3.0 * p.y;
  const SampleSet s(pts);
  const auto queries = random_queries(50, 0.1, 0.9, 78);

  auto errors = [&](const EstimatorSettings& settings) {
    const ImputationContext ctx(s, settings);
    double worst = 0.0, sum2 = 0.0;
    for (const auto& q : queries) {
      const double err = std::abs(impute_point(ctx, q).value - (2.0 * q.x + 3.0 * q.y));
      worst = std::max(worst, err);
      sum2 += err * err;
    }
    return std::pair{worst, std::sqrt(sum2 / static_cast<double>(queries.size()))};
  };

  // Without a polynomial tail the local fit only approximates a plane; the
  // default (spacing-proportional) levels land at about 2.4e-2 worst case.
  const auto [worst_default, rms_default] = errors({});
  MESSAGE("default levels: max " << worst_default << ", rms " << rms_default);
  CHECK(worst_default <= 3e-2);
  CHECK(rms_default <= 1e-2);

  // Flatter kernels (levels doubled) reach 1e-2 absolute.
  EstimatorSettings flat;
  auto lv = default_levels(s).values();
  for (auto& c : lv) c *= 2.0;
  flat.shape_levels = ShapeFactorLevels(lv);
  const auto [worst_flat, rms_flat] = errors(flat);
  MESSAGE("doubled levels: max " << worst_flat << ", rms " << rms_flat);
  CHECK(worst_flat <= 1e-2);
}

TEST_CASE("translation invariance of the full pipeline") {
  const auto pts = oracle::random_points(500, 100.0, 5);
  std::vector<SamplePoint> moved = pts;
  const double tx = 4096.0, ty = -2048.0;
  for (auto& p : moved) p.x += tx, p.y += ty;
  const SampleSet a(pts), b(moved);
  const ImputationContext ca(a, {}), cb(b, {});
  for (const auto& q : random_queries(30, 10.0, 90.0, 6)) {
    const double va = impute_point(ca, q).value;
    const double vb = impute_point(cb, {q.x + tx, q.y + ty}).value;
    CHECK(std::abs(va - vb) <= 1e-9 * std::max(1.0, std::abs(va)));
  }
}

TEST_CASE("impute_batch") {
  const auto pts = oracle::random_points(3000, 1000.0, 9);
  const SampleSet s(pts);
  const ImputationContext ctx(s, {});

  SUBCASE("empty") {
    const auto r = impute_batch(ctx, {}, Method::Rbf);
    CHECK(r.estimates.empty());
    CHECK(r.failures.empty());
  }
  SUBCASE("singleton equals impute_point") {
    const QueryPoint q{500.5, 400.25};
    const auto r = impute_batch(ctx, std::vector<QueryPoint>{q}, Method::Rbf);
    REQUIRE(r.estimates.size() == 1);
    CHECK(same_estimate(r.estimates[0], impute_point(ctx, q)));
  }
  SUBCASE("worker count does not change any bit") {
    const auto queries = random_queries(10000, 0.0, 1000.0, 10);
    for (Method m : {Method::Rbf, Method::Knn, Method::Aidw}) {
      const auto one = impute_batch(ctx, queries, m, {1, true});
      const auto many = impute_batch(ctx, queries, m, {4, true});
      CHECK(many.workers == 4);
      REQUIRE(one.estimates.size() == many.estimates.size());
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < queries.size(); ++i) {
        if (!same_estimate(one.estimates[i], many.estimates[i])) ++mismatches;
      }
      CHECK(mismatches == 0);
    }
  }
  SUBCASE("kernel level does not change any bit") {
    if (!simd::is_supported(simd::Level::Avx2)) return;
    const auto queries = random_queries(2000, 0.0, 1000.0, 11);
    const auto before = simd::active_level();
    simd::set_active_level(simd::Level::Scalar);
    const auto scalar = impute_batch(ctx, queries, Method::Rbf);
    simd::set_active_level(simd::Level::Avx2);
    const auto vector = impute_batch(ctx, queries, Method::Rbf);
    simd::set_active_level(before);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (!same_estimate(scalar.estimates[i], vector.estimates[i])) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("per-point failures are collected with indices") {
  std::vector<SamplePoint> pts;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) pts.push_back({double(i), double(j), double(i + j)});
  const SampleSet s(pts);
  EstimatorSettings settings;
  settings.shape_levels = ShapeFactorLevels({1e9, 1e9, 1e9, 1e9, 1e9});  // hopelessly flat kernels
  CaptureWarnings warnings;
  const ImputationContext ctx(s, settings);
  const std::vector<QueryPoint> queries{{3, 3}, {10.5, 10.5}, {20.25, 5.75}};
  const auto r = impute_batch(ctx, queries, Method::Rbf, {2, true});
  REQUIRE(r.failures.size() == 2);
  CHECK(r.failures[0].index == 1);
  CHECK(r.failures[1].index == 2);
  CHECK(r.failures[0].code == ErrorCode::SingularSystem);
  CHECK(r.estimates[0].value == 3 + 3);  // snapped
  CHECK(std::isnan(r.estimates[1].value));

  try {
    impute_batch(ctx, queries, Method::Rbf, {1, false});
    FAIL("expected the first failure to be rethrown");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
    CHECK(std::string(e.what()).rfind("point 1:", 0) == 0);
  }
}

TEST_CASE("single-sample dataset") {
  const SampleSet s({{0, 0, 4}});
  CaptureWarnings warnings;
  const ImputationContext ctx(s, {});
  CHECK(ctx.k() == 1);
  CHECK(estimate_point(ctx, {3, 3}, Method::Knn).value == 4.0);
  CHECK(estimate_point(ctx, {3, 3}, Method::Aidw).value == 4.0);
  CHECK_THROWS_AS(impute_point(ctx, {3, 3}), Error);

  EstimatorSettings explicit_levels;
  explicit_levels.shape_levels = ShapeFactorLevels({1, 1, 1, 1, 1});
  const ImputationContext ctx2(s, explicit_levels);
  // One center: a = y / c, f(q) = y * sqrt(r^2 + c^2) / c.
  CHECK(impute_point(ctx2, {3, 4}).value == doctest::Approx(4.0 * std::sqrt(26.0)).epsilon(1e-14));
}
