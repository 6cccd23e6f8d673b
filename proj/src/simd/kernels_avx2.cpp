#include <immintrin.h>

#include <cmath>

#include "kernels.hpp"

namespace geoimpute::simd::detail {
namespace {

inline __m256d squared_distance4(__m256d qx, __m256d qy, const double* xs, const double* ys) {
  const __m256d dx = _mm256_sub_pd(qx, _mm256_loadu_pd(xs));
  const __m256d dy = _mm256_sub_pd(qy, _mm256_loadu_pd(ys));
  return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

// (l0 + l2) + (l1 + l3), matching the scalar fold.
inline double fold_lanes(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

void squared_distances_avx2(double qx, double qy, const double* xs, const double* ys,
                            double* out, std::size_t n) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, squared_distance4(vqx, vqy, xs + i, ys + i));
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    out[i] = dx * dx + dy * dy;
  }
}

void mq_values_avx2(double qx, double qy, const double* xs, const double* ys, double c,
                    double* out, std::size_t n) {
  const double c2 = c * c;
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vc2 = _mm256_set1_pd(c2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d2 = squared_distance4(vqx, vqy, xs + i, ys + i);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_add_pd(d2, vc2)));
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    out[i] = std::sqrt((dx * dx + dy * dy) + c2);
  }
}

double mq_weighted_sum_avx2(double qx, double qy, const double* xs, const double* ys,
                            const double* w, double c, std::size_t n) {
  const double c2 = c * c;
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vc2 = _mm256_set1_pd(c2);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d phi =
        _mm256_sqrt_pd(_mm256_add_pd(squared_distance4(vqx, vqy, xs + i, ys + i), vc2));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), phi));
  }
  double sum = fold_lanes(acc);
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    sum += w[i] * std::sqrt((dx * dx + dy * dy) + c2);
  }
  return sum;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double sum = fold_lanes(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void sub_scaled_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] -= a * x[i];
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static constexpr KernelTable table{squared_distances_avx2, mq_values_avx2,
                                     mq_weighted_sum_avx2, dot_avx2, sub_scaled_avx2};
  return table;
}

}  // namespace geoimpute::simd::detail
