#include "kinwave/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kinwave/errors.hpp"

namespace kinwave {

namespace {
constexpr double kSymmetryTol = 1e-12;

bool detect_symmetry(const std::vector<double>& v, const std::vector<double>& w) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    // sorted order pairs i with n-1-i under v -> -v
    const std::size_t j = n - 1 - i;
    if (std::abs(v[i] + v[j]) > kSymmetryTol) return false;
    if (std::abs(w[i] - w[j]) > kSymmetryTol) return false;
  }
  return true;
}
}  // namespace

double VelocityMeasure::v0() const {
  return std::max(std::abs(velocities.front()), std::abs(velocities.back()));
}

std::size_t VelocityMeasure::count_below(double c) const {
  return static_cast<std::size_t>(
      std::lower_bound(velocities.begin(), velocities.end(), c) -
      velocities.begin());
}

void VelocityMeasure::validate() const {
  if (velocities.size() < 2)
    throw InvalidInput("measure: need at least two velocities");
  if (velocities.size() != weights.size())
    throw InvalidInput("measure: velocity/weight length mismatch");
  for (std::size_t i = 0; i + 1 < velocities.size(); ++i)
    if (!(velocities[i] < velocities[i + 1]))
      throw InvalidInput("measure: velocities not strictly increasing");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidInput("measure: nonpositive weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidInput("measure: weights do not sum to one");
}

VelocityMeasure make_discrete(std::vector<double> velocities,
                              std::vector<double> weights) {
  if (velocities.empty()) throw InvalidInput("make_discrete: empty input");
  if (velocities.size() != weights.size())
    throw InvalidInput("make_discrete: length mismatch");
  if (velocities.size() < 2)
    throw InvalidInput("make_discrete: need at least two velocities");

  std::vector<std::size_t> order(velocities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return velocities[a] < velocities[b]; });

  VelocityMeasure m;
  m.velocities.reserve(order.size());
  m.weights.reserve(order.size());
  double total = 0.0;
  for (std::size_t k : order) {
    const double v = velocities[k];
    const double w = weights[k];
    if (!std::isfinite(v)) throw InvalidInput("make_discrete: non-finite velocity");
    if (!(w > 0.0)) throw InvalidInput("make_discrete: nonpositive weight");
    if (!m.velocities.empty() && !(m.velocities.back() < v))
      throw InvalidInput("make_discrete: duplicate velocity");
    m.velocities.push_back(v);
    m.weights.push_back(w);
    total += w;
  }
  for (double& w : m.weights) w /= total;
  m.symmetric = detect_symmetry(m.velocities, m.weights);
  m.validate();
  return m;
}

double DensitySpec::operator()(double v) const {
  const double u = v / v0;
  switch (kind) {
    case DensityKind::uniform:
      return 1.0;
    case DensityKind::semicircle: {
      const double q = 1.0 - u * u;
      if (q <= 0.0) throw InvalidInput("density: semicircle evaluated at support endpoint");
      return 1.0 / (std::numbers::pi * std::sqrt(q));
    }
    case DensityKind::ball2d: {
      const double q = std::max(0.0, 1.0 - u * u);
      return 2.0 / std::numbers::pi * std::sqrt(q);
    }
    case DensityKind::ball3d:
      return 0.75 * std::max(0.0, 1.0 - u * u);
    case DensityKind::exp_bump:
      return 1.0 + a * std::exp(-b * std::abs(v));
    case DensityKind::table: {
      if (v <= xs.front()) return ys.front();
      if (v >= xs.back()) return ys.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), v);
      const std::size_t j = static_cast<std::size_t>(it - xs.begin());
      const double t = (v - xs[j - 1]) / (xs[j] - xs[j - 1]);
      return ys[j - 1] + t * (ys[j] - ys[j - 1]);
    }
  }
  throw InvalidInput("density: unknown kind");
}

void DensitySpec::validate() const {
  if (!(v0 > 0.0)) throw InvalidInput("density: support half-width must be positive");
  if (kind == DensityKind::exp_bump && !(1.0 + a >= 0.0))
    throw InvalidInput("density: exp_bump negative at large |v|");
  if (kind == DensityKind::table) {
    if (xs.size() < 2 || xs.size() != ys.size())
      throw InvalidInput("density: bad table");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (!(xs[i] < xs[i + 1])) throw InvalidInput("density: table nodes not increasing");
    for (double y : ys)
      if (y < 0.0) throw InvalidInput("density: table value negative");
  }
}

VelocityMeasure quadrature(const DensitySpec& density, std::size_t n,
                           QuadratureRule rule) {
  density.validate();
  if (n < 2) throw InvalidInput("quadrature: need n >= 2");

  std::vector<double> x(n), w(n);
  if (rule == QuadratureRule::midpoint) {
    const double h = 2.0 * density.v0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = -density.v0 + (static_cast<double>(i) + 0.5) * h;
      w[i] = h;
    }
  } else {
    gauss_legendre(n, -density.v0, density.v0, x, w);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double d = density(x[i]);
    if (!(d >= 0.0) || !std::isfinite(d))
      throw InvalidInput("quadrature: density evaluates negative or non-finite");
    w[i] *= d;
  }
  return make_discrete(std::move(x), std::move(w));
}

void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
  if (n < 1) throw InvalidInput("gauss_legendre: n too small for rule");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi *
                        (static_cast<double>(i) - 0.25) /
                        (static_cast<double>(n) + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double dj = static_cast<double>(j);
        p1 = ((2.0 * dj - 1.0) * z * p2 - (dj - 1.0) * p3) / dj;
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    x[i - 1] = xm - xl * z;
    x[n - i] = xm + xl * z;
    w[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - i] = w[i - 1];
  }
}

}  // namespace kinwave
