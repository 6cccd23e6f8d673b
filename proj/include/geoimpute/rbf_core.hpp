#pragma once

#include <cstddef>
#include <vector>

#include "geoimpute/core_model.hpp"

namespace geoimpute {

/// Condition estimate above which a local system is flagged ill-conditioned.
inline constexpr double kIllConditionedThreshold = 1e12;

/// Pivots below this fraction of the largest matrix entry count as singular.
inline constexpr double kSingularPivotRatio = 1e-14;

/// Required residual: ||A a - y||_inf <= kResidualTolerance * max(1, ||y||_inf).
inline constexpr double kResidualTolerance = 1e-8;

/// Dense symmetric multiquadric system over one neighborhood.
struct RbfSystem {
  std::size_t n = 0;
  std::vector<double> matrix;  // row-major n x n
  std::vector<double> rhs;
  double shape_factor = 0.0;
  std::vector<double> xs;  // centers
  std::vector<double> ys;

  double at(std::size_t i, std::size_t j) const noexcept { return matrix[i * n + j]; }
};

struct RbfCoefficients {
  std::vector<double> coefficients;
  double shape_factor = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  double residual = 0.0;            // ||A a - y||_inf after solving
  double condition_estimate = 0.0;  // 1-norm estimate
  bool ill_conditioned() const noexcept { return condition_estimate > kIllConditionedThreshold; }
};

/// sqrt(r^2 + c^2)
double mq_kernel(double r, double c) noexcept;

RbfSystem assemble_system(const LocalNeighborhood& nbhd, double c);

/// LU with partial pivoting, up to two rounds of iterative refinement, and a
/// Hager 1-norm condition estimate. Throws SingularSystem.
RbfCoefficients solve_system(const RbfSystem& system);

double evaluate_interpolant(const RbfCoefficients& coeffs, const QueryPoint& q);

}  // namespace geoimpute
