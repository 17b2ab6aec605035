#include "kinwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kinwave/errors.hpp"

namespace kinwave {

namespace {

constexpr double kDegenerate = 1e-8;

void normalize(std::vector<double>& x) {
  double norm = 0.0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw NumericalError("nullspace: zero vector");
  for (double& v : x) v /= norm;
}

// One-sided Jacobi: orthogonalize the columns of a; the accumulated right
// rotations give V, and the null direction is the V column whose rotated
// column has the smallest norm.
std::vector<double> jacobi_null_direction(std::vector<double> a,
                                          std::size_t n,
                                          double* ratio_out) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const auto col_dot = [&](std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i * n + p] * a[i * n + q];
    return s;
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = col_dot(p, q);
        const double app = col_dot(p, p);
        const double aqq = col_dot(q, q);
        if (std::abs(apq) <= 1e-300) continue;
        off = std::max(off, std::abs(apq) / std::sqrt(app * aqq + 1e-300));
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double ap = a[i * n + p], aq = a[i * n + q];
          a[i * n + p] = cs * ap - sn * aq;
          a[i * n + q] = sn * ap + cs * aq;
          const double vp = v[i * n + p], vq = v[i * n + q];
          v[i * n + p] = cs * vp - sn * vq;
          v[i * n + q] = sn * vp + cs * vq;
        }
      }
    }
    if (off < 1e-14) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(j, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return sigma[x] < sigma[y]; });

  const double smax = sigma[order.back()];
  if (smax == 0.0) throw NumericalError("nullspace: zero matrix");
  if (ratio_out) *ratio_out = sigma[order[0]] / smax;
  if (n >= 2 && sigma[order[1]] / smax < kDegenerate)
    throw NumericalError(
        "nullspace: null space dimension exceeds one (degenerate matrix)");

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = v[i * n + order[0]];
  return x;
}

}  // namespace

NullspaceResult nullspace_rank_deficient_1(std::vector<double> a,
                                           std::size_t n) {
  if (n == 0) throw InvalidInput("nullspace: empty matrix");
  NullspaceResult res;

  std::vector<double> u = a;  // elimination scratch, a kept for the fallback
  std::vector<std::size_t> col(n);
  std::iota(col.begin(), col.end(), std::size_t{0});

  std::vector<double> pivots(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t pi = s, pj = s;
    double best = 0.0;
    for (std::size_t i = s; i < n; ++i)
      for (std::size_t j = s; j < n; ++j)
        if (std::abs(u[i * n + j]) > best) {
          best = std::abs(u[i * n + j]);
          pi = i;
          pj = j;
        }
    pivots[s] = best;
    if (best == 0.0) break;
    if (pi != s)
      for (std::size_t j = 0; j < n; ++j)
        std::swap(u[s * n + j], u[pi * n + j]);
    if (pj != s) {
      for (std::size_t i = 0; i < n; ++i)
        std::swap(u[i * n + s], u[i * n + pj]);
      std::swap(col[s], col[pj]);
    }
    const double piv = u[s * n + s];
    for (std::size_t i = s + 1; i < n; ++i) {
      const double factor = u[i * n + s] / piv;
      u[i * n + s] = 0.0;
      for (std::size_t j = s + 1; j < n; ++j)
        u[i * n + j] -= factor * u[s * n + j];
    }
  }

  const double pmax = pivots[0];
  if (pmax == 0.0) throw NumericalError("nullspace: zero matrix");
  res.pivot_ratio = pivots[n - 1] / pmax;
  const double second_smallest = n >= 2 ? pivots[n - 2] / pmax : 1.0;

  if (second_smallest < kDegenerate) {
    // Elimination cannot tell rank n-1 from rank n-2 here; let the SVD decide.
    res.used_svd = true;
    res.x = jacobi_null_direction(std::move(a), n, &res.pivot_ratio);
    normalize(res.x);
    return res;
  }

  std::vector<double> y(n, 0.0);
  y[n - 1] = 1.0;
  for (std::size_t ii = n - 1; ii-- > 0;) {
    double s = 0.0;
    for (std::size_t j = ii + 1; j < n; ++j) s += u[ii * n + j] * y[j];
    y[ii] = -s / u[ii * n + ii];
  }
  res.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) res.x[col[j]] = y[j];
  normalize(res.x);
  return res;
}

}  // namespace kinwave
