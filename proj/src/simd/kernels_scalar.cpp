#include <cmath>

#include "kernels.hpp"

namespace geoimpute::simd::detail {
namespace {

void squared_distances_scalar(double qx, double qy, const double* xs, const double* ys,
                              double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    out[i] = dx * dx + dy * dy;
  }
}

void mq_values_scalar(double qx, double qy, const double* xs, const double* ys, double c,
                      double* out, std::size_t n) {
  const double c2 = c * c;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    out[i] = std::sqrt((dx * dx + dy * dy) + c2);
  }
}

// Reductions mirror a 4-wide register: lane l accumulates elements i = l mod 4
// of the blocked prefix, lanes fold as (l0 + l2) + (l1 + l3), then the tail is
// added in order.
double fold_lanes(const double (&acc)[4]) noexcept {
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double mq_weighted_sum_scalar(double qx, double qy, const double* xs, const double* ys,
                              const double* w, double c, std::size_t n) {
  const double c2 = c * c;
  const std::size_t blocked = n & ~std::size_t{3};
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double dx = qx - xs[i + l];
      const double dy = qy - ys[i + l];
      acc[l] += w[i + l] * std::sqrt((dx * dx + dy * dy) + c2);
    }
  }
  double sum = fold_lanes(acc);
  for (std::size_t i = blocked; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    sum += w[i] * std::sqrt((dx * dx + dy * dy) + c2);
  }
  return sum;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  const std::size_t blocked = n & ~std::size_t{3};
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) acc[l] += a[i + l] * b[i + l];
  }
  double sum = fold_lanes(acc);
  for (std::size_t i = blocked; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void sub_scaled_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] -= a * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static constexpr KernelTable table{squared_distances_scalar, mq_values_scalar,
                                     mq_weighted_sum_scalar, dot_scalar, sub_scaled_scalar};
  return table;
}

}  // namespace geoimpute::simd::detail
