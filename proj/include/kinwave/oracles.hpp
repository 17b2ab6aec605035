#pragma once

#include <cstddef>
#include <vector>

#include "kinwave/kinetics.hpp"
#include "kinwave/measures.hpp"
#include "kinwave/transfer.hpp"

namespace kinwave {

// Macroscopic (diffusion-limit) travelling wave, fully explicit. Serves as an
// independent oracle for the kinetic construction.
struct MacroParams {
  double chi_s = 0.0;
  double chi_n = 0.0;
  double alpha = 1.0;
  double d_s = 1.0;
  double d_rho = 1.0;

  double lambda_minus(double c) const { return (-c + chi_s + chi_n) / d_rho; }
  double lambda_plus(double c) const { return (c + chi_s - chi_n) / d_rho; }
};

// Unique speed in (0, chi_n) solving chi_n - c = chi_s c / sqrt(c^2 + 4 alpha
// d_s); returns 0 directly for chi_n = 0.
double macro_speed(const MacroParams& mp);

// Signal slope at the origin up to a positive factor:
// -mu_+/(mu_+ + lambda_-) + mu_-/(mu_- + lambda_+). Strictly decreasing in c.
double macro_upsilon(const MacroParams& mp, double c);

// Two-sided exponential cell density, value 1 at the origin.
double macro_density(const MacroParams& mp, double c, double z);

// Time-marched steady state of the moving-frame kinetic equation under the
// frozen four-quadrant rate: upwind transport plus explicit relaxation, zero
// inflow at both ends, mass renormalized to one every step.
struct RelaxationResult {
  std::vector<double> z;               // cell centers on (-L, L)
  std::vector<std::vector<double>> f;  // [velocity][cell]
  std::vector<double> residual_history;  // L1 change per unit time
  double dz = 0.0;
  double t_final = 0.0;
  std::size_t steps = 0;

  // Conserved upwind flux through the interface right of cell m.
  double interface_flux(const VelocityMeasure& m_, double c,
                        std::size_t cell) const;
  double mass(const VelocityMeasure& m_) const;
};

RelaxationResult relax_to_steady(
    const VelocityMeasure& m, const KineticParams& p, double c, double L,
    std::size_t nz, double dt, double t_end,
    const std::vector<std::vector<double>>* initial = nullptr,
    double stop_residual = 0.0);

// Samples the modal profile on the relaxation grid.
std::vector<std::vector<double>> sample_profile(const WaveProfile& profile,
                                                const std::vector<double>& z);

// || f_grid - f_modal ||_L1 over the grid.
double l1_distance(const RelaxationResult& r, const VelocityMeasure& m,
                   const WaveProfile& profile);

struct OvershootReport {
  std::vector<double> argmax_z;            // per velocity
  std::vector<std::size_t> overshooting;   // indices with argmax right of 0
  // Smallest overshooting velocity index, or npos when there is none.
  std::size_t first_overshoot = static_cast<std::size_t>(-1);
  bool any() const { return !overshooting.empty(); }
};

// Locates, per velocity, the spatial argmax of f and reports the velocities
// whose maximum sits strictly right of the origin.
OvershootReport overshoot_detect(const WaveProfile& profile, double half_width,
                                 std::size_t nodes);
OvershootReport overshoot_detect(const RelaxationResult& r);

}  // namespace kinwave
