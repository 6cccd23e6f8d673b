#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "geoimpute/error.hpp"
#include "kernels.hpp"

namespace geoimpute::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(GEOIMPUTE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Level initial_level() noexcept {
  Level level = detected_level();
  if (const char* env = std::getenv("GEOIMPUTE_SIMD")) {
    if (std::string_view(env) == "scalar") level = Level::Scalar;
  }
  return level;
}

std::atomic<Level>& active() noexcept {
  static std::atomic<Level> level{initial_level()};
  return level;
}

const KernelTable& table() noexcept {
#if defined(GEOIMPUTE_HAVE_AVX2)
  if (active().load(std::memory_order_relaxed) == Level::Avx2) return detail::avx2_kernels();
#endif
  return detail::scalar_kernels();
}

}  // namespace

std::string_view to_string(Level level) noexcept {
  return level == Level::Avx2 ? "avx2" : "scalar";
}

Level detected_level() noexcept {
  static const Level level = cpu_has_avx2() ? Level::Avx2 : Level::Scalar;
  return level;
}

bool is_supported(Level level) noexcept {
  return level == Level::Scalar || detected_level() == Level::Avx2;
}

Level active_level() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
  if (!is_supported(level)) {
    throw Error(ErrorCode::InvalidArgument,
                "SIMD level '" + std::string(to_string(level)) + "' is not supported here");
  }
  active().store(level, std::memory_order_relaxed);
}

const KernelTable& kernels(Level level) {
  if (!is_supported(level)) {
    throw Error(ErrorCode::InvalidArgument,
                "SIMD level '" + std::string(to_string(level)) + "' is not supported here");
  }
#if defined(GEOIMPUTE_HAVE_AVX2)
  if (level == Level::Avx2) return detail::avx2_kernels();
#endif
  return detail::scalar_kernels();
}

void squared_distances(double qx, double qy, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> out) {
  table().squared_distances(qx, qy, xs.data(), ys.data(), out.data(), xs.size());
}

void mq_values(double qx, double qy, std::span<const double> xs, std::span<const double> ys,
               double c, std::span<double> out) {
  table().mq_values(qx, qy, xs.data(), ys.data(), c, out.data(), xs.size());
}

double mq_weighted_sum(double qx, double qy, std::span<const double> xs,
                       std::span<const double> ys, std::span<const double> w, double c) {
  return table().mq_weighted_sum(qx, qy, xs.data(), ys.data(), w.data(), c, xs.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  return table().dot(a.data(), b.data(), a.size());
}

void sub_scaled(std::span<double> y, double a, std::span<const double> x) {
  table().sub_scaled(y.data(), a, x.data(), y.size());
}

}  // namespace geoimpute::simd
