#pragma once

#include <cstddef>
#include <vector>

namespace kinwave {

// Discrete velocity measure: strictly increasing velocities with positive
// weights summing to one. Immutable after construction; safe to share across
// threads.
struct VelocityMeasure {
  std::vector<double> velocities;
  std::vector<double> weights;
  bool symmetric = false;  // v -> -v leaves the (velocity, weight) pairs fixed

  std::size_t size() const { return velocities.size(); }
  double v_min() const { return velocities.front(); }
  double v_max() const { return velocities.back(); }
  // Maximal speed of the support; sets the scale of collision tolerances.
  double v0() const;
  // Index count below a given speed: #{ v_i < c }.
  std::size_t count_below(double c) const;

  void validate() const;  // throws InvalidInput on a broken invariant
};

// Builds a normalized measure from raw (velocity, weight) lists. Velocities
// are sorted; duplicates, nonpositive weights and fewer than two points are
// rejected. The symmetry flag is auto-detected with absolute tolerance 1e-12
// on both v and w.
VelocityMeasure make_discrete(std::vector<double> velocities,
                              std::vector<double> weights);

enum class DensityKind {
  uniform,           // constant on (-v0, v0)
  semicircle,        // (1 - (v/v0)^2)^(-1/2), projection of the unit circle
  ball2d,            // (1 - (v/v0)^2)^(+1/2), projection of the unit disk
  ball3d,            // 1 - (v/v0)^2, projection of the unit ball
  exp_bump,          // 1 + a*exp(-b|v|)
  table,             // piecewise-linear tabulated density
};

struct DensitySpec {
  DensityKind kind = DensityKind::uniform;
  double v0 = 1.0;  // support is (-v0, v0)
  double a = 0.0;   // exp_bump amplitude
  double b = 0.0;   // exp_bump decay
  std::vector<double> xs, ys;  // table nodes (xs increasing, ys >= 0)

  double operator()(double v) const;
  void validate() const;
};

enum class QuadratureRule { midpoint, gauss_legendre };

// Discretizes a continuous density into a velocity measure: weights are
// rule weight x density, then normalized to total mass one. The midpoint rule
// is the default; it never samples the support endpoints, which keeps the
// singular semicircle density finite.
VelocityMeasure quadrature(const DensitySpec& density, std::size_t n,
                           QuadratureRule rule = QuadratureRule::midpoint);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace kinwave
