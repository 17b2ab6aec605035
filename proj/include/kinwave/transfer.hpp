#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kinwave/case_modes.hpp"

namespace kinwave {

// Complete wave profile at a fixed speed: the mode basis plus the matched
// weights, normalized to unit total mass. Immutable after solve; evaluators
// are pure.
class WaveProfile {
 public:
  WaveProfile(ModeBasis basis, std::vector<double> a, std::vector<double> b);

  const ModeBasis& basis() const { return basis_; }
  const std::vector<double>& left_weights() const { return a_; }
  const std::vector<double>& right_weights() const { return b_; }
  double c() const { return basis_.c; }
  // Principal asymptotic amplitudes: f(z,v) ~ kappa e^{-lambda|z|} F(v).
  double kappa_plus() const { return b_.front(); }
  double kappa_minus() const { return a_.front(); }
  double lambda_principal_left() const { return basis_.left.front().lambda; }
  double lambda_principal_right() const { return basis_.right.front().lambda; }

  // Microscopic density f(z, v_i); the two expansions agree at z = 0.
  double f(double z, std::size_t i) const;
  // Spatial density and its split by the sign of v - c.
  double rho(double z) const;
  double rho_side(double z, int vc_sign) const;
  // Density of tumbling events I(z); z = 0 evaluates the z > 0 branch.
  double tumbling_density(double z) const;
  // sum_i w_i (v_i - c) f(z, v_i); vanishes identically for exact weights.
  double flux(double z) const;

  double mass() const;
  // max_i |f_-(0,v_i) - f_+(0,v_i)| relative to the profile scale at z = 0.
  double continuity_residual() const;
  bool positive_on(std::span<const double> zgrid) const;

 private:
  struct SideData {
    std::vector<double> lambda, weight, mean, mean_below, mean_above;
  };
  ModeBasis basis_;
  std::vector<double> a_, b_;
  SideData l_, r_;
};

// Matching matrix at z = 0: column j < K holds -F_-^j(v_i), column j >= K
// holds F_+^j(v_i); row-major N x N. The row vector w_i (v_i - c) annihilates
// it from the left by the dispersion relations.
std::vector<double> transfer_matrix(const ModeBasis& basis);

// Solves the one-dimensional null space of the transfer matrix, fixes the
// sign so total mass is positive, scales to unit mass, and verifies f > 0 on
// a sample grid. Throws when the null space is not one-dimensional or f has
// mixed signs after the flip.
WaveProfile solve_weights(ModeBasis basis);

struct MonotonicityViolation {
  std::string quantity;
  double z;
};

// Checks the four directional densities rho_{z sign}^{v sign} for strict
// monotonicity on the sampled grid: decreasing on z > 0, increasing on z < 0.
struct MonotonicityReport {
  bool rho_pos_above = true;  // z>0, v>c decreasing
  bool rho_pos_below = true;  // z>0, v<c decreasing
  bool rho_neg_above = true;  // z<0, v>c increasing
  bool rho_neg_below = true;  // z<0, v<c increasing
  std::vector<MonotonicityViolation> violations;
  bool clean() const {
    return rho_pos_above && rho_pos_below && rho_neg_above && rho_neg_below;
  }
};

MonotonicityReport monotonicity_report(const WaveProfile& profile,
                                       std::span<const double> zgrid);

// Sample grid sized from the principal exponents: points per side on
// (0, extent/lambda], mirrored to z < 0; excludes 0.
std::vector<double> default_zgrid(const WaveProfile& profile,
                                  std::size_t per_side = 200,
                                  double extent = 8.0);

}  // namespace kinwave
