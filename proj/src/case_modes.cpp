#include "kinwave/case_modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinwave/errors.hpp"
#include "kinwave/roots.hpp"
#include "kinwave/simd.hpp"

namespace kinwave {

namespace {

constexpr double kCollisionTol = 1e-9;  // scaled by v0
constexpr double kPoleInset = 1e-10;    // relative inset from bracket poles

// Per-velocity ratios g_i = T(v_i - c)/(v_i - c) for one side's rates.
std::vector<double> pole_ratios(const VelocityMeasure& m,
                                const KineticParams& p, double c, Side side) {
  std::vector<double> g(m.size());
  const double t_below = side == Side::left ? p.t_mm() : p.t_pm();
  const double t_above = side == Side::left ? p.t_mp() : p.t_pp();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = m.velocities[i] - c;
    g[i] = (u < 0.0 ? t_below : t_above) / u;
  }
  return g;
}

double q_eval(const std::vector<double>& w, const std::vector<double>& g,
              double lambda, double sign) {
  return simd::active().shifted_reciprocal_sum(w.data(), g.data(), w.size(),
                                               lambda, sign);
}

void check_collision(const VelocityMeasure& m, double c) {
  const double tol = kCollisionTol * m.v0();
  for (double v : m.velocities)
    if (std::abs(v - c) <= tol)
      throw NumericalError("case_modes: c collides with a discrete velocity");
}

}  // namespace

double dispersion_value(const VelocityMeasure& m, const KineticParams& p,
                        double c, Side side, double lambda) {
  const auto g = pole_ratios(m, p, c, side);
  const double sign = side == Side::left ? 1.0 : -1.0;
  for (double gi : g)
    if (std::abs(gi + sign * lambda) <
        1e-14 * std::max(std::abs(gi), std::abs(lambda)))
      throw NumericalError("dispersion_value: evaluation at a pole");
  return q_eval(m.weights, g, lambda, sign);
}

CaseMode mode_profile(const VelocityMeasure& m, const KineticParams& p,
                      double c, Side side, double lambda) {
  if (!(lambda > 0.0))
    throw NumericalError("mode_profile: exponent must be positive");
  CaseMode mode;
  mode.side = side;
  mode.lambda = lambda;
  mode.profile.resize(m.size());
  const double t_below = side == Side::left ? p.t_mm() : p.t_pm();
  const double t_above = side == Side::left ? p.t_mp() : p.t_pp();
  const double sgn = side == Side::left ? 1.0 : -1.0;
  // The k-th mode sits above k-1 poles, so its profile changes sign exactly
  // there: negative entries are admissible only at velocities whose pole lies
  // below lambda. Everywhere else the entry must be positive.
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = m.velocities[i] - c;
    const double denom = (u < 0.0 ? t_below : t_above) + sgn * lambda * u;
    const bool crossed =
        side == Side::left ? (u < 0.0 && lambda > t_below / -u)
                           : (u > 0.0 && lambda > t_above / u);
    if (denom == 0.0 || (denom < 0.0) != crossed)
      throw NumericalError(
          "mode_profile: profile sign pattern inconsistent, exponent outside "
          "its bracket");
    mode.profile[i] = 1.0 / denom;
  }
  mode.mean = simd::active().dot(m.weights.data(), mode.profile.data(),
                                 m.size());

  // The zero-flux identity is the dispersion relation itself; residual scaled
  // by the flux magnitude so near-pole modes with one huge entry still pass.
  double flux = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double t = m.weights[i] * (m.velocities[i] - c) * mode.profile[i];
    flux += t;
    scale += std::abs(t);
  }
  if (std::abs(flux) > 1e-11 * std::max(1.0, scale))
    throw NumericalError("mode_profile: zero-flux residual too large");
  return mode;
}

ModeBasis dispersion_roots(const VelocityMeasure& m, const KineticParams& p,
                           double c) {
  m.validate();
  check_collision(m, c);

  ModeBasis basis(m, p, c);
  basis.k_below = m.count_below(c);
  const std::size_t n = m.size();
  const std::size_t k = basis.k_below;

  const auto solve_side = [&](Side side) {
    const auto g = pole_ratios(m, p, c, side);
    const double sign = side == Side::left ? 1.0 : -1.0;

    // Positive poles of Q: velocities below c on the left, above on the
    // right. Collected in increasing order.
    std::vector<double> poles;
    if (side == Side::left) {
      poles.reserve(k);
      for (std::size_t i = 0; i < k; ++i) poles.push_back(-g[i]);
    } else {
      poles.reserve(n - k);
      for (std::size_t i = n; i-- > k;) poles.push_back(g[i]);
    }
    for (std::size_t i = 0; i + 1 < poles.size(); ++i)
      if (!(poles[i] < poles[i + 1]))
        throw NumericalError("dispersion_roots: pole ordering degenerate");

    std::vector<CaseMode>& out =
        side == Side::left ? basis.left : basis.right;
    out.reserve(poles.size());

    double lo = 0.0;
    double f_lo = q_eval(m.weights, g, lo, sign);
    // Q_-(0) > 0 for c < c_hi, Q_+(0) < 0 for c > c_lo.
    const double want_lo = side == Side::left ? 1.0 : -1.0;
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const double pole = poles[j];
      const double hi = pole - std::max(kPoleInset * pole, 5e-300);
      if (!(hi > lo))
        throw NumericalError("dispersion_roots: bracket collapsed");
      const double f_hi = q_eval(m.weights, g, hi, sign);
      if (!(f_lo * want_lo > 0.0) || !(f_hi * want_lo < 0.0))
        throw NumericalError(
            "dispersion_roots: bracket endpoint sign check failed");
      const double root = bisect(
          [&](double lam) { return q_eval(m.weights, g, lam, sign); }, lo, hi,
          f_lo, f_hi);
      out.push_back(mode_profile(m, p, c, side, root));

      lo = pole + std::max(kPoleInset * pole, 5e-300);
      if (j + 1 < poles.size()) f_lo = q_eval(m.weights, g, lo, sign);
    }
  };

  if (k == 0 || k == n)
    throw NumericalError(
        "dispersion_roots: c outside the velocity support, one side has no "
        "modes");
  solve_side(Side::left);
  solve_side(Side::right);

  return basis;
}

}  // namespace kinwave
