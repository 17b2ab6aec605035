#include "kinwave/fields.hpp"

#include <algorithm>
#include <cmath>

#include "kinwave/errors.hpp"

namespace kinwave {

GreenExponents green_exponents(double c, double alpha, double d_s) {
  if (!(alpha > 0.0) || !(d_s > 0.0))
    throw InvalidInput("green_exponents: alpha and d_s must be positive");
  GreenExponents g;
  const double disc = std::sqrt(c * c + 4.0 * alpha * d_s);
  g.mu_minus = (-c + disc) / (2.0 * d_s);
  g.mu_plus = (c + disc) / (2.0 * d_s);
  g.s0 = 1.0 / disc;
  g.alpha = alpha;
  g.d_s = d_s;
  return g;
}

double upsilon(const WaveProfile& profile, double alpha, double d_s) {
  const auto g = green_exponents(profile.c(), alpha, d_s);
  const auto& basis = profile.basis();
  const auto& a = profile.left_weights();
  const auto& b = profile.right_weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double lam = basis.left[j].lambda;
    acc += a[j] * basis.left[j].mean * lam / (lam + g.mu_plus);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double lam = basis.right[j].lambda;
    acc -= b[j] * basis.right[j].mean * lam / (lam + g.mu_minus);
  }
  return acc;
}

namespace {

constexpr double kResonanceTol = 1e-9;

// Convolution of A e^{lambda y} 1_{y<0} with the Green kernel.
double left_mode_signal(double amp, double lambda, const GreenExponents& g,
                        double z) {
  if (z > 0.0) return amp * std::exp(-g.mu_plus * z) / (g.mu_plus + lambda);
  const double head = std::exp(lambda * z) / (g.mu_plus + lambda);
  const double gap = lambda - g.mu_minus;
  if (std::abs(gap) < kResonanceTol * std::max(1.0, g.mu_minus))
    return amp * (head - z * std::exp(lambda * z));
  return amp *
         (head + (std::exp(g.mu_minus * z) - std::exp(lambda * z)) / gap);
}

// Convolution of B e^{-lambda y} 1_{y>0} with the Green kernel.
double right_mode_signal(double amp, double lambda, const GreenExponents& g,
                         double z) {
  if (z < 0.0) return amp * std::exp(g.mu_minus * z) / (g.mu_minus + lambda);
  const double tail = std::exp(-lambda * z) / (g.mu_minus + lambda);
  const double gap = g.mu_plus - lambda;
  if (std::abs(gap) < kResonanceTol * std::max(1.0, g.mu_plus))
    return amp * (tail + z * std::exp(-lambda * z));
  return amp *
         (tail + (std::exp(-lambda * z) - std::exp(-g.mu_plus * z)) / gap);
}

}  // namespace

FieldTable signal_profile(const WaveProfile& profile, double alpha, double d_s,
                          std::span<const double> grid) {
  const auto g = green_exponents(profile.c(), alpha, d_s);
  const auto& basis = profile.basis();
  const auto& a = profile.left_weights();
  const auto& b = profile.right_weights();

  FieldTable table;
  table.z.assign(grid.begin(), grid.end());
  table.value.resize(grid.size());
  const double norm = GreenExponents::beta * g.s0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double z = grid[m];
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      s += left_mode_signal(a[j] * basis.left[j].mean, basis.left[j].lambda,
                            g, z);
    for (std::size_t j = 0; j < b.size(); ++j)
      s += right_mode_signal(b[j] * basis.right[j].mean,
                             basis.right[j].lambda, g, z);
    table.value[m] = norm * s;
  }
  return table;
}

NutrientSolution nutrient_profile(const WaveProfile& profile, double gamma,
                                  double d_n, double L, std::size_t n_grid,
                                  double n_plus) {
  const double c = profile.c();
  if (!(c > 0.0)) throw InvalidInput("nutrient_profile: requires c > 0");
  if (!(gamma > 0.0) || !(d_n > 0.0) || !(n_plus > 0.0))
    throw InvalidInput("nutrient_profile: gamma, d_n, n_plus must be positive");
  if (n_grid < 2) throw InvalidInput("nutrient_profile: grid too small");
  if (!(L > 0.0)) throw InvalidInput("nutrient_profile: L must be positive");

  NutrientSolution sol;
  sol.d_n = d_n;
  sol.gamma = gamma;
  sol.n_plus = n_plus;
  sol.z.resize(n_grid);
  sol.u.resize(n_grid);
  std::vector<double> w(n_grid);  // antiderivative of u from -L

  const double h = 2.0 * L / static_cast<double>(n_grid - 1);
  const auto slope = [&](double z, double u) {
    return -(c / d_n) * u - u * u + (gamma / d_n) * profile.rho(z);
  };

  double u = 0.0, wacc = 0.0;
  for (std::size_t m = 0; m < n_grid; ++m) {
    const double z = -L + h * static_cast<double>(m);
    sol.z[m] = z;
    sol.u[m] = u;
    w[m] = wacc;
    if (m + 1 == n_grid) break;

    const double k1 = slope(z, u);
    const double k2 = slope(z + 0.5 * h, u + 0.5 * h * k1);
    const double k3 = slope(z + 0.5 * h, u + 0.5 * h * k2);
    const double k4 = slope(z + h, u + h * k3);
    const double u1 = u + 0.5 * h * k1;
    const double u2 = u + 0.5 * h * k2;
    const double u3 = u + h * k3;
    wacc += h / 6.0 * (u + 2.0 * u1 + 2.0 * u2 + u3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(u) || std::abs(u) > 1e8)
      throw NumericalError("nutrient_profile: log-derivative blew up");
  }

  sol.n.resize(n_grid);
  const double w_end = w.back();
  for (std::size_t m = 0; m < n_grid; ++m)
    sol.n[m] = n_plus * std::exp(w[m] - w_end);
  return sol;
}

AnsatzReport ansatz_check(const FieldTable& s, const NutrientSolution* n) {
  AnsatzReport rep;
  if (s.z.size() < 3) throw InvalidInput("ansatz_check: signal table too small");

  std::size_t peak = 0;
  for (std::size_t m = 1; m < s.value.size(); ++m)
    if (s.value[m] > s.value[peak]) peak = m;
  rep.s_argmax = s.z[peak];

  const double scale = s.value[peak];
  const double tol = 1e-12 * std::max(1e-300, scale);
  bool unimodal = true;
  for (std::size_t m = 0; m + 1 < s.value.size(); ++m) {
    if (m < peak && s.value[m + 1] < s.value[m] - tol) unimodal = false;
    if (m >= peak && s.value[m + 1] > s.value[m] + tol) unimodal = false;
  }
  rep.s_unimodal = unimodal;

  double cell = 0.0;
  for (std::size_t m = 0; m + 1 < s.z.size(); ++m)
    cell = std::max(cell, s.z[m + 1] - s.z[m]);
  rep.s_peak_at_origin = std::abs(rep.s_argmax) <= cell * (1.0 + 1e-12);

  if (n != nullptr) {
    rep.n_checked = true;
    // monotone increase; in the far tails u underflows and N is flat to the
    // last bit, so equality is allowed pointwise but not globally
    rep.n_increasing = n->n.back() > n->n.front();
    for (std::size_t m = 0; m + 1 < n->n.size(); ++m)
      if (n->n[m + 1] < n->n[m]) rep.n_increasing = false;
  }

  rep.valid = rep.s_unimodal && rep.s_peak_at_origin &&
              (!rep.n_checked || rep.n_increasing);
  return rep;
}

}  // namespace kinwave
