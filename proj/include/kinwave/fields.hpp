#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinwave/transfer.hpp"

namespace kinwave {

// Exponents of the two-sided exponential Green kernel of the operator
// -c d/dz - d_s d2/dz2 + alpha. s0 is the kernel's true normalization.
struct GreenExponents {
  double mu_minus = 0.0;  // (-c + sqrt(c^2 + 4 alpha d_s)) / (2 d_s)
  double mu_plus = 0.0;   // ( c + sqrt(c^2 + 4 alpha d_s)) / (2 d_s)
  double s0 = 0.0;        // 1 / sqrt(c^2 + 4 alpha d_s)
  double alpha = 0.0;
  double d_s = 0.0;
  static constexpr double beta = 1.0;
};

GreenExponents green_exponents(double c, double alpha, double d_s);

// Matching function: the modal form of the signal slope at the origin,
//   sum_k a_k <F_-^k> lambda_-^k/(lambda_-^k + mu_+)
// - sum_k b_k <F_+^k> lambda_+^k/(lambda_+^k + mu_-).
// Exact in the modal representation; no quadrature. The physical slope of the
// tabulated signal is s0 * beta times this value.
double upsilon(const WaveProfile& profile, double alpha, double d_s);

struct FieldTable {
  std::vector<double> z;
  std::vector<double> value;
};

// Signal concentration S = kernel * (beta rho) in closed form: each mode
// exponential convolved with the two-sided exponential kernel. Resonant pairs
// |lambda - mu| below 1e-9 switch to the z e^{-mu z} limit formula.
FieldTable signal_profile(const WaveProfile& profile, double alpha, double d_s,
                          std::span<const double> grid);

struct NutrientSolution {
  std::vector<double> z;
  std::vector<double> u;  // d/dz log N
  std::vector<double> n;  // N itself, pinned to n_plus at the right end
  double d_n = 1.0;
  double gamma = 1.0;
  double n_plus = 1.0;
};

// Integrates the log-derivative ODE
//   u' = -(c/d_n) u - u^2 + (gamma/d_n) rho(z)
// from u(-L) = 0 rightward with fixed-step RK4 (deterministic grids), then
// reconstructs N from the jointly integrated antiderivative of u.
// Requires c > 0.
NutrientSolution nutrient_profile(const WaveProfile& profile, double gamma,
                                  double d_n, double L, std::size_t n_grid,
                                  double n_plus = 1.0);

struct AnsatzReport {
  bool s_unimodal = false;       // increasing then decreasing, single peak
  bool s_peak_at_origin = false; // argmax within one grid cell of 0
  double s_argmax = 0.0;
  bool n_checked = false;
  bool n_increasing = false;
  bool valid = false;
};

// A-posteriori validation of the frozen sign pattern. Pass n = nullptr when
// the nutrient check does not apply (c <= 0); it is then skipped and reported
// as not applicable.
AnsatzReport ansatz_check(const FieldTable& s, const NutrientSolution* n);

}  // namespace kinwave
