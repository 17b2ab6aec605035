#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kinwave/simd.hpp"

// AVX2 variants of the inner loops. Each reduction keeps two accumulators to
// hide the division / FMA latency; tails fall back to scalar code.

namespace kinwave::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double a_shifted_reciprocal_sum(const double* w, const double* g,
                                std::size_t n, double lambda, double s) {
  const __m256d shift = _mm256_set1_pd(s * lambda);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_add_pd(_mm256_loadu_pd(g + i), shift);
    const __m256d d1 = _mm256_add_pd(_mm256_loadu_pd(g + i + 4), shift);
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(w + i), d0));
    acc1 = _mm256_add_pd(acc1, _mm256_div_pd(_mm256_loadu_pd(w + i + 4), d1));
  }
  if (i + 4 <= n) {
    const __m256d d0 = _mm256_add_pd(_mm256_loadu_pd(g + i), shift);
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(w + i), d0));
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] / (g[i] + s * lambda);
  return acc;
}

double a_dot(const double* w, const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4),
                           _mm256_loadu_pd(x + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i),
                           acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * x[i];
  return acc;
}

double a_dot3(const double* w, const double* x, const double* y,
              std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i),
                                     _mm256_loadu_pd(x + i));
    acc0 = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

void a_axpy(double* y, const double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void a_scale(double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double a_sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  if (i + 4 <= n) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double a_l1_diff(const double* x, const double* y, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign_mask, d));
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += std::abs(x[i] - y[i]);
  return acc;
}

void a_upwind_operator_pos(double* out, const double* f, const double* turn,
                           std::size_t n, double s, double rate, double g1,
                           double g2) {
  if (n == 0) return;
  out[0] = -s * (3.0 * f[0] - 4.0 * g1 + g2) + turn[0] - rate * f[0];
  if (n > 1)
    out[1] = -s * (3.0 * f[1] - 4.0 * f[0] + g1) + turn[1] - rate * f[1];
  const __m256d c3 = _mm256_set1_pd(-3.0 * s - rate);
  const __m256d c4 = _mm256_set1_pd(4.0 * s);
  const __m256d c1 = _mm256_set1_pd(-s);
  std::size_t i = 2;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_mul_pd(c3, _mm256_loadu_pd(f + i));
    r = _mm256_fmadd_pd(c4, _mm256_loadu_pd(f + i - 1), r);
    r = _mm256_fmadd_pd(c1, _mm256_loadu_pd(f + i - 2), r);
    r = _mm256_add_pd(r, _mm256_loadu_pd(turn + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i)
    out[i] = -s * (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) + turn[i] -
             rate * f[i];
}

void a_upwind_operator_neg(double* out, const double* f, const double* turn,
                           std::size_t n, double s, double rate, double g1,
                           double g2) {
  if (n == 0) return;
  out[n - 1] = -s * (3.0 * f[n - 1] - 4.0 * g1 + g2) + turn[n - 1] -
               rate * f[n - 1];
  if (n == 1) return;
  out[n - 2] = -s * (3.0 * f[n - 2] - 4.0 * f[n - 1] + g1) + turn[n - 2] -
               rate * f[n - 2];
  const __m256d c3 = _mm256_set1_pd(-3.0 * s - rate);
  const __m256d c4 = _mm256_set1_pd(4.0 * s);
  const __m256d c1 = _mm256_set1_pd(-s);
  std::size_t i = 0;
  for (; i + 4 <= n - 2; i += 4) {
    __m256d r = _mm256_mul_pd(c3, _mm256_loadu_pd(f + i));
    r = _mm256_fmadd_pd(c4, _mm256_loadu_pd(f + i + 1), r);
    r = _mm256_fmadd_pd(c1, _mm256_loadu_pd(f + i + 2), r);
    r = _mm256_add_pd(r, _mm256_loadu_pd(turn + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i + 3 <= n; ++i)
    out[i] = -s * (3.0 * f[i] - 4.0 * f[i + 1] + f[i + 2]) + turn[i] -
             rate * f[i];
}

}  // namespace

const Kernels avx2_kernels = {
    a_shifted_reciprocal_sum,
    a_dot,
    a_dot3,
    a_axpy,
    a_scale,
    a_sum,
    a_l1_diff,
    a_upwind_operator_pos,
    a_upwind_operator_neg,
    "avx2",
};

}  // namespace kinwave::simd
