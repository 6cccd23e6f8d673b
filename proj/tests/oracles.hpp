#pragma once

// Test-only reference computations. Deliberately naive and independent of the
// library's code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geoimpute/core_model.hpp"

namespace oracle {

using geoimpute::QueryPoint;
using geoimpute::SamplePoint;

/// Full scan; returns (ingestion index, squared distance) ascending by
/// (squared distance, index).
inline std::vector<std::pair<std::size_t, double>> brute_force_knn(
    const std::vector<SamplePoint>& pts, QueryPoint q, std::size_t k) {
  std::vector<std::pair<std::size_t, double>> all;
  all.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = q.x - pts[i].x;
    const double dy = q.y - pts[i].y;
    all.emplace_back(i, dx * dx + dy * dy);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  all.resize(k);
  return all;
}

/// Gauss-Jordan elimination with complete pivoting in extended precision.
inline std::vector<double> gauss_jordan_solve(std::vector<double> a, std::vector<double> b,
                                              std::size_t n) {
  std::vector<long double> m(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * (n + 1) + j] = a[i * n + j];
    m[i * (n + 1) + n] = b[i];
  }
  const std::size_t w = n + 1;
  std::vector<std::size_t> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    long double best = 0;
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        if (std::fabs(m[i * w + j]) > best) {
          best = std::fabs(m[i * w + j]);
          pr = i;
          pc = j;
        }
      }
    }
    if (best == 0) throw std::runtime_error("oracle: singular");
    for (std::size_t j = 0; j < w; ++j) std::swap(m[k * w + j], m[pr * w + j]);
    for (std::size_t i = 0; i < n; ++i) std::swap(m[i * w + k], m[i * w + pc]);
    std::swap(col[k], col[pc]);
    const long double p = m[k * w + k];
    for (std::size_t j = 0; j < w; ++j) m[k * w + j] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const long double f = m[i * w + k];
      for (std::size_t j = 0; j < w; ++j) m[i * w + j] -= f * m[k * w + j];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[col[i]] = static_cast<double>(m[i * w + n]);
  return x;
}

/// ||A||_1 * ||A^-1||_1 with the inverse formed column by column.
inline double condition_one_norm(const std::vector<double>& a, std::size_t n) {
  double a_norm = 0.0, inv_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i * n + j]);
    a_norm = std::max(a_norm, s);
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = gauss_jordan_solve(a, e, n);
    double t = 0.0;
    for (double v : col) t += std::abs(v);
    inv_norm = std::max(inv_norm, t);
  }
  return a_norm * inv_norm;
}

/// The triangular shape-factor membership written branch by branch.
inline double eq8_branch(double mu, const std::array<double, 5>& c) {
  if (mu >= 0.0 && mu <= 0.1) return c[0];
  if (mu <= 0.3) return c[0] * (1.0 - 5.0 * (mu - 0.1)) + 5.0 * c[1] * (mu - 0.1);
  if (mu <= 0.5) return 5.0 * c[2] * (mu - 0.3) + c[1] * (1.0 - 5.0 * (mu - 0.3));
  if (mu <= 0.7) return c[2] * (1.0 - 5.0 * (mu - 0.5)) + 5.0 * c[3] * (mu - 0.5);
  if (mu <= 0.9) return 5.0 * c[4] * (mu - 0.7) + c[3] * (1.0 - 5.0 * (mu - 0.7));
  return c[4];
}

inline std::vector<SamplePoint> random_points(std::size_t n, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<SamplePoint> pts(n);
  for (auto& p : pts) {
    p.x = u(rng);
    p.y = u(rng);
    p.value = u(rng);
  }
  return pts;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
