#include "geoimpute/rbf_core.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "geoimpute/error.hpp"
#include "geoimpute/simd.hpp"

namespace geoimpute {
namespace {

/// PA = LU, stored compactly in one row-major buffer.
class DenseLu {
 public:
  explicit DenseLu(const RbfSystem& system)
      : n_(system.n), lu_(system.matrix), perm_(system.n) {
    double max_entry = 0.0;
    for (double v : lu_) max_entry = std::max(max_entry, std::abs(v));
    const double pivot_floor = kSingularPivotRatio * max_entry;

    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      double best = std::abs(at(k, k));
      for (std::size_t i = k + 1; i < n_; ++i) {
        const double v = std::abs(at(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best >= pivot_floor) || best == 0.0) {
        throw Error(ErrorCode::SingularSystem,
                    "pivot " + std::to_string(best) + " at column " + std::to_string(k) +
                        " is below the singularity floor");
      }
      if (p != k) {
        std::swap_ranges(row(k).begin(), row(k).end(), row(p).begin());
        std::swap(perm_[k], perm_[p]);
      }
      const double pivot = at(k, k);
      const auto pivot_tail = row(k).subspan(k + 1);
      for (std::size_t i = k + 1; i < n_; ++i) {
        const double l = at(i, k) / pivot;
        at(i, k) = l;
        if (l != 0.0) simd::sub_scaled(row(i).subspan(k + 1), l, pivot_tail);
      }
    }
  }

  /// Solves A x = b in place.
  void solve(std::vector<double>& b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
      x[i] -= simd::dot(crow(i).first(i), std::span<const double>(x).first(i));
    }
    for (std::size_t i = n_; i-- > 0;) {
      const double s = simd::dot(crow(i).subspan(i + 1), std::span<const double>(x).subspan(i + 1));
      x[i] = (x[i] - s) / cat(i, i);
    }
    b = std::move(x);
  }

  /// Solves A^T x = b in place.
  void solve_transposed(std::vector<double>& b) const {
    // A^T = U^T L^T P: forward with U^T, backward with L^T, then undo P.
    std::vector<double> w(b);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = w[i];
      for (std::size_t j = 0; j < i; ++j) s -= cat(j, i) * w[j];
      w[i] = s / cat(i, i);
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = w[i];
      for (std::size_t j = i + 1; j < n_; ++j) s -= cat(j, i) * w[j];
      w[i] = s;
    }
    for (std::size_t i = 0; i < n_; ++i) b[perm_[i]] = w[i];
  }

 private:
  double& at(std::size_t i, std::size_t j) noexcept { return lu_[i * n_ + j]; }
  double cat(std::size_t i, std::size_t j) const noexcept { return lu_[i * n_ + j]; }
  std::span<double> row(std::size_t i) noexcept { return std::span(lu_).subspan(i * n_, n_); }
  std::span<const double> crow(std::size_t i) const noexcept {
    return std::span<const double>(lu_).subspan(i * n_, n_);
  }

  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double one_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

std::vector<double> residual(const RbfSystem& system, const std::vector<double>& a) {
  std::vector<double> r(system.n);
  const std::span<const double> m(system.matrix);
  for (std::size_t i = 0; i < system.n; ++i) {
    r[i] = system.rhs[i] - simd::dot(m.subspan(i * system.n, system.n), a);
  }
  return r;
}

// Hager's estimate of ||A^-1||_1.
double inverse_one_norm_estimate(const DenseLu& lu, std::size_t n) {
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<double> y = x;
    lu.solve(y);
    const double norm = one_norm(y);
    if (iter > 0 && norm <= estimate) break;
    estimate = norm;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    lu.solve_transposed(z);
    std::size_t j = 0;
    double zx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(z[i]) > std::abs(z[j])) j = i;
      zx += z[i] * x[i];
    }
    if (std::abs(z[j]) <= zx) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[j] = 1.0;
  }
  return estimate;
}

}  // namespace

double mq_kernel(double r, double c) noexcept { return std::sqrt(r * r + c * c); }

RbfSystem assemble_system(const LocalNeighborhood& nbhd, double c) {
  const std::size_t n = nbhd.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "cannot assemble a system without neighbors");
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "shape factor must be finite and non-negative");
  }
  RbfSystem sys;
  sys.n = n;
  sys.shape_factor = c;
  sys.matrix.assign(n * n, 0.0);
  sys.rhs.resize(n);
  sys.xs.resize(n);
  sys.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sys.xs[i] = nbhd.neighbors[i].point.x;
    sys.ys[i] = nbhd.neighbors[i].point.y;
    sys.rhs[i] = nbhd.neighbors[i].point.value;
  }

  const double coincident2 = std::pow(kCoincidenceTolerance * nbhd.local_bbox.max_extent(), 2);
  std::vector<double> d2(n);
  const std::span<const double> xs(sys.xs), ys(sys.ys);
  for (std::size_t i = 0; i < n; ++i) {
    sys.matrix[i * n + i] = c;
    const std::size_t tail = n - i - 1;
    if (tail == 0) continue;
    const auto out = std::span(sys.matrix).subspan(i * n + i + 1, tail);
    simd::squared_distances(xs[i], ys[i], xs.subspan(i + 1), ys.subspan(i + 1),
                            std::span(d2).first(tail));
    for (std::size_t t = 0; t < tail; ++t) {
      if (d2[t] <= coincident2) {
        throw Error(ErrorCode::DuplicatePoint, "neighbors " + std::to_string(i) + " and " +
                                                   std::to_string(i + 1 + t) + " coincide");
      }
    }
    simd::mq_values(xs[i], ys[i], xs.subspan(i + 1), ys.subspan(i + 1), c, out);
    for (std::size_t t = 0; t < tail; ++t) sys.matrix[(i + 1 + t) * n + i] = out[t];
  }
  return sys;
}

RbfCoefficients solve_system(const RbfSystem& system) {
  const std::size_t n = system.n;
  if (n == 0) throw Error(ErrorCode::EmptyInput, "empty system");
  const DenseLu lu(system);

  std::vector<double> a = system.rhs;
  lu.solve(a);

  const double tolerance = kResidualTolerance * std::max(1.0, inf_norm(system.rhs));
  std::vector<double> r = residual(system, a);
  double res = inf_norm(r);
  for (int round = 0; round < 2 && res > 1e-3 * tolerance; ++round) {
    lu.solve(r);
    std::vector<double> refined(a);
    for (std::size_t i = 0; i < n; ++i) refined[i] += r[i];
    std::vector<double> r2 = residual(system, refined);
    const double res2 = inf_norm(r2);
    if (!(res2 < res)) break;
    a = std::move(refined);
    r = std::move(r2);
    res = res2;
  }
  if (!(res <= tolerance)) {
    throw Error(ErrorCode::SingularSystem, "residual " + std::to_string(res) +
                                               " exceeds tolerance " + std::to_string(tolerance));
  }

  double a_norm = 0.0;  // 1-norm = max column sum; the matrix is symmetric
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(system.at(i, j));
    a_norm = std::max(a_norm, s);
  }

  RbfCoefficients out;
  out.coefficients = std::move(a);
  out.shape_factor = system.shape_factor;
  out.xs = system.xs;
  out.ys = system.ys;
  out.residual = res;
  out.condition_estimate = a_norm * inverse_one_norm_estimate(lu, n);
  return out;
}

double evaluate_interpolant(const RbfCoefficients& coeffs, const QueryPoint& q) {
  return simd::mq_weighted_sum(q.x, q.y, coeffs.xs, coeffs.ys, coeffs.coefficients,
                               coeffs.shape_factor);
}

}  // namespace geoimpute
