#pragma once

// Data-parallel inner loops shared by the neighbor search, the RBF system
// assembly/solve and the interpolant evaluation.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant picked
// at runtime. The variants are bitwise interchangeable: element-wise kernels
// perform the same IEEE operations (no FMA contraction), and reductions use
// the same four-lane accumulation order in both paths. Results therefore do
// not depend on which level is active.

#include <cstddef>
#include <span>
#include <string_view>

namespace geoimpute::simd {

enum class Level { Scalar, Avx2 };

std::string_view to_string(Level level) noexcept;

/// Best level the running CPU supports and this build was compiled for.
Level detected_level() noexcept;

/// Level used by the dispatching entry points. Starts at detected_level(),
/// unless the GEOIMPUTE_SIMD environment variable names a lower one.
Level active_level() noexcept;

/// Throws InvalidArgument if `level` is not supported on this machine.
void set_active_level(Level level);

bool is_supported(Level level) noexcept;

/// out[i] = (qx - xs[i])^2 + (qy - ys[i])^2
void squared_distances(double qx, double qy, std::span<const double> xs,
                       std::span<const double> ys, std::span<double> out);

/// out[i] = sqrt((qx - xs[i])^2 + (qy - ys[i])^2 + c^2), the multiquadric
/// kernel between the query and each center.
void mq_values(double qx, double qy, std::span<const double> xs,
               std::span<const double> ys, double c, std::span<double> out);

/// sum_i w[i] * sqrt((qx - xs[i])^2 + (qy - ys[i])^2 + c^2)
double mq_weighted_sum(double qx, double qy, std::span<const double> xs,
                       std::span<const double> ys, std::span<const double> w, double c);

double dot(std::span<const double> a, std::span<const double> b);

/// y[i] -= a * x[i]
void sub_scaled(std::span<double> y, double a, std::span<const double> x);

/// Direct access to one level's kernels, for equivalence testing.
struct KernelTable {
  void (*squared_distances)(double, double, const double*, const double*, double*, std::size_t);
  void (*mq_values)(double, double, const double*, const double*, double, double*, std::size_t);
  double (*mq_weighted_sum)(double, double, const double*, const double*, const double*, double,
                            std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*sub_scaled)(double*, double, const double*, std::size_t);
};

/// Throws InvalidArgument if `level` is not supported on this machine.
const KernelTable& kernels(Level level);

}  // namespace geoimpute::simd
