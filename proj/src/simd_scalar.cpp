#include <cmath>
#include <cstddef>

#include "kinwave/simd.hpp"

namespace kinwave::simd {
namespace {

double s_shifted_reciprocal_sum(const double* w, const double* g,
                                std::size_t n, double lambda, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] / (g[i] + s * lambda);
  return acc;
}

double s_dot(const double* w, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i];
  return acc;
}

double s_dot3(const double* w, const double* x, const double* y,
              std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

void s_axpy(double* y, const double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scale(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_l1_diff(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(x[i] - y[i]);
  return acc;
}

void s_upwind_operator_pos(double* out, const double* f, const double* turn,
                           std::size_t n, double s, double rate, double g1,
                           double g2) {
  double prev1 = g1, prev2 = g2;
  for (std::size_t i = 0; i < n; ++i) {
    const double fi = f[i];
    out[i] = -s * (3.0 * fi - 4.0 * prev1 + prev2) + turn[i] - rate * fi;
    prev2 = prev1;
    prev1 = fi;
  }
}

void s_upwind_operator_neg(double* out, const double* f, const double* turn,
                           std::size_t n, double s, double rate, double g1,
                           double g2) {
  double next1 = g1, next2 = g2;
  for (std::size_t i = n; i-- > 0;) {
    const double fi = f[i];
    out[i] = -s * (3.0 * fi - 4.0 * next1 + next2) + turn[i] - rate * fi;
    next2 = next1;
    next1 = fi;
  }
}

}  // namespace

const Kernels scalar_kernels = {
    s_shifted_reciprocal_sum,
    s_dot,
    s_dot3,
    s_axpy,
    s_scale,
    s_sum,
    s_l1_diff,
    s_upwind_operator_pos,
    s_upwind_operator_neg,
    "scalar",
};

}  // namespace kinwave::simd
