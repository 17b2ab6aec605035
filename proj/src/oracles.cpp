#include "kinwave/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinwave/errors.hpp"
#include "kinwave/fields.hpp"
#include "kinwave/roots.hpp"
#include "kinwave/simd.hpp"

namespace kinwave {

double macro_speed(const MacroParams& mp) {
  if (!(mp.chi_s > 0.0 && mp.chi_s < 0.5))
    throw InvalidInput("macro_speed: chi_s must lie in (0, 1/2)");
  if (mp.chi_n < 0.0) throw InvalidInput("macro_speed: chi_n negative");
  if (mp.chi_n == 0.0) return 0.0;
  const auto residual = [&](double c) {
    return mp.chi_n - c -
           mp.chi_s * c / std::sqrt(c * c + 4.0 * mp.alpha * mp.d_s);
  };
  return bisect(residual, 0.0, mp.chi_n, residual(0.0), residual(mp.chi_n));
}

double macro_upsilon(const MacroParams& mp, double c) {
  const double lm = mp.lambda_minus(c);
  const double lp = mp.lambda_plus(c);
  if (!(lm > 0.0 && lp > 0.0))
    throw InvalidInput("macro_upsilon: c outside the admissible interval");
  const auto g = green_exponents(c, mp.alpha, mp.d_s);
  return -g.mu_plus / (g.mu_plus + lm) + g.mu_minus / (g.mu_minus + lp);
}

double macro_density(const MacroParams& mp, double c, double z) {
  const double lm = mp.lambda_minus(c);
  const double lp = mp.lambda_plus(c);
  if (!(lm > 0.0 && lp > 0.0))
    throw InvalidInput("macro_density: c outside the admissible interval");
  return z < 0.0 ? std::exp(lm * z) : std::exp(-lp * z);
}

namespace {

struct Rates {
  double below_neg, above_neg;  // z < 0: T for v<c, v>c
  double below_pos, above_pos;  // z > 0
};

}  // namespace

double RelaxationResult::interface_flux(const VelocityMeasure& m_, double c,
                                        std::size_t cell) const {
  // Numerical flux of the one-sided second-order stencil through the
  // interface between cells `cell` and `cell + 1`; this is the quantity the
  // scheme conserves exactly at steady state.
  double phi = 0.0;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const double a = m_.velocities[i] - c;
    const double up =
        a > 0.0 ? 0.5 * (3.0 * f[i][cell] - f[i][cell - 1])
                : 0.5 * (3.0 * f[i][cell + 1] - f[i][cell + 2]);
    phi += m_.weights[i] * a * up;
  }
  return phi;
}

double RelaxationResult::mass(const VelocityMeasure& m_) const {
  const auto& k = simd::active();
  double total = 0.0;
  for (std::size_t i = 0; i < m_.size(); ++i)
    total += m_.weights[i] * k.sum(f[i].data(), f[i].size());
  return total * dz;
}

RelaxationResult relax_to_steady(
    const VelocityMeasure& m, const KineticParams& p, double c, double L,
    std::size_t nz, double dt, double t_end,
    const std::vector<std::vector<double>>* initial, double stop_residual) {
  m.validate();
  if (nz < 8) throw InvalidInput("relax_to_steady: nz too small");
  if (!(L > 0.0) || !(dt > 0.0) || !(t_end > 0.0))
    throw InvalidInput("relax_to_steady: L, dt, t_end must be positive");

  const std::size_t n = m.size();
  const double dz = 2.0 * L / static_cast<double>(nz);
  double a_max = 0.0;
  for (double v : m.velocities) a_max = std::max(a_max, std::abs(v - c));
  if (dt * a_max > dz * (1.0 + 1e-12))
    throw InvalidInput("relax_to_steady: CFL violation, dt too large");

  RelaxationResult res;
  res.dz = dz;
  res.z.resize(nz);
  for (std::size_t mcell = 0; mcell < nz; ++mcell)
    res.z[mcell] = -L + (static_cast<double>(mcell) + 0.5) * dz;
  // first cell center on the positive side
  std::size_t mid = 0;
  while (mid < nz && res.z[mid] < 0.0) ++mid;
  if (mid < 2 || mid + 2 > nz)
    throw InvalidInput("relax_to_steady: domain does not straddle the origin");

  if (initial) {
    if (initial->size() != n)
      throw InvalidInput("relax_to_steady: initial data velocity count");
    for (const auto& row : *initial)
      if (row.size() != nz)
        throw InvalidInput("relax_to_steady: initial data cell count");
    res.f = *initial;
  } else {
    res.f.assign(n, std::vector<double>(nz, 1.0));
  }

  const auto& kern = simd::active();
  {
    const double total = res.mass(m);
    if (!(total > 0.0))
      throw InvalidInput("relax_to_steady: initial data has no mass");
    for (auto& row : res.f) kern.scale(row.data(), nz, 1.0 / total);
  }

  const Rates rates{p.t_mm(), p.t_mp(), p.t_pm(), p.t_pp()};

  std::vector<std::vector<double>> stage(n, std::vector<double>(nz, 0.0));
  std::vector<std::vector<double>> slope1(n, std::vector<double>(nz, 0.0));
  std::vector<double> turn(nz, 0.0);
  std::vector<double> slope2(nz, 0.0);

  const auto turning = [&](const std::vector<std::vector<double>>& f) {
    std::fill(turn.begin(), turn.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const bool above = m.velocities[i] > c;
      const double w = m.weights[i];
      kern.axpy(turn.data(), f[i].data(), mid,
                w * (above ? rates.above_neg : rates.below_neg));
      kern.axpy(turn.data() + mid, f[i].data() + mid, nz - mid,
                w * (above ? rates.above_pos : rates.below_pos));
    }
  };

  // Semi-discrete operator for row i: second-order one-sided upwind transport
  // (first order at the inflow boundary) plus pointwise relaxation, with the
  // rate switching at the origin.
  const auto apply_operator = [&](const std::vector<double>& f, double* out,
                                  std::size_t i) {
    const double a = m.velocities[i] - c;
    const double s = std::abs(a) / (2.0 * dz);
    const bool above = m.velocities[i] > c;
    const double t_neg = above ? rates.above_neg : rates.below_neg;
    const double t_pos = above ? rates.above_pos : rates.below_pos;
    if (a > 0.0) {
      kern.upwind_operator_pos(out, f.data(), turn.data(), mid, s, t_neg, 0.0,
                               0.0);
      kern.upwind_operator_pos(out + mid, f.data() + mid, turn.data() + mid,
                               nz - mid, s, t_pos, f[mid - 1], f[mid - 2]);
    } else {
      kern.upwind_operator_neg(out + mid, f.data() + mid, turn.data() + mid,
                               nz - mid, s, t_pos, 0.0, 0.0);
      kern.upwind_operator_neg(out, f.data(), turn.data(), mid, s, t_neg,
                               f[mid], f[mid + 1]);
    }
  };

  const std::size_t total_steps =
      static_cast<std::size_t>(std::ceil(t_end / dt));
  const std::size_t check_every = 50;
  double prev_residual = std::numeric_limits<double>::infinity();
  int rising = 0;
  std::vector<std::vector<double>> before;

  std::size_t step = 0;
  for (; step < total_steps; ++step) {
    const bool checkpoint =
        (step % check_every == check_every - 1) || step + 1 == total_steps;
    if (checkpoint) before = res.f;

    // Heun step: the fixed point solves the semi-discrete system exactly
    turning(res.f);
    for (std::size_t i = 0; i < n; ++i) {
      apply_operator(res.f[i], slope1[i].data(), i);
      stage[i] = res.f[i];
      kern.axpy(stage[i].data(), slope1[i].data(), nz, dt);
    }
    turning(stage);
    for (std::size_t i = 0; i < n; ++i) {
      apply_operator(stage[i], slope2.data(), i);
      kern.axpy(res.f[i].data(), slope1[i].data(), nz, 0.5 * dt);
      kern.axpy(res.f[i].data(), slope2.data(), nz, 0.5 * dt);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += m.weights[i] * kern.sum(res.f[i].data(), nz);
    total *= dz;
    if (!std::isfinite(total) || !(total > 0.0))
      throw NumericalError("relax_to_steady: mass lost, scheme diverged");
    const double rescale = 1.0 / total;
    for (auto& row : res.f) kern.scale(row.data(), nz, rescale);

    if (checkpoint) {
      // state change per unit time across the whole step, renormalization
      // included
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        change += m.weights[i] *
                  kern.l1_diff(res.f[i].data(), before[i].data(), nz);
      const double residual = change * dz / dt;
      res.residual_history.push_back(residual);
      if (!std::isfinite(residual))
        throw NumericalError("relax_to_steady: residual not finite");
      if (residual > prev_residual * 1.05) {
        if (++rising >= 5)
          throw NumericalError(
              "relax_to_steady: residual not decreasing, scheme diverged");
      } else {
        rising = 0;
      }
      prev_residual = residual;
      if (stop_residual > 0.0 && residual < stop_residual) {
        ++step;
        break;
      }
    }
  }

  res.steps = step;
  res.t_final = static_cast<double>(step) * dt;
  return res;
}

std::vector<std::vector<double>> sample_profile(const WaveProfile& profile,
                                                const std::vector<double>& z) {
  const std::size_t n = profile.basis().measure.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(z.size()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mcell = 0; mcell < z.size(); ++mcell)
      out[i][mcell] = profile.f(z[mcell], i);
  return out;
}

double l1_distance(const RelaxationResult& r, const VelocityMeasure& m,
                   const WaveProfile& profile) {
  const auto ref = sample_profile(profile, r.z);
  const auto& kern = simd::active();
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    acc += m.weights[i] *
           kern.l1_diff(r.f[i].data(), ref[i].data(), r.z.size());
  return acc * r.dz;
}

namespace {

OvershootReport detect(const std::vector<std::vector<double>>& f,
                       const std::vector<double>& z) {
  OvershootReport rep;
  rep.argmax_z.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t mcell = 1; mcell < z.size(); ++mcell)
      if (f[i][mcell] > f[i][best]) best = mcell;
    rep.argmax_z[i] = z[best];
    if (z[best] > 0.0) rep.overshooting.push_back(i);
  }
  if (!rep.overshooting.empty()) rep.first_overshoot = rep.overshooting.front();
  return rep;
}

}  // namespace

OvershootReport overshoot_detect(const WaveProfile& profile,
                                 double half_width, std::size_t nodes) {
  if (nodes % 2 == 0) ++nodes;  // node at z = 0
  std::vector<double> z(nodes);
  const double h = 2.0 * half_width / static_cast<double>(nodes - 1);
  for (std::size_t j = 0; j < nodes; ++j)
    z[j] = -half_width + h * static_cast<double>(j);
  z[(nodes - 1) / 2] = 0.0;
  return detect(sample_profile(profile, z), z);
}

OvershootReport overshoot_detect(const RelaxationResult& r) {
  return detect(r.f, r.z);
}

}  // namespace kinwave
