#include "kinwave/kinetics.hpp"

#include <cmath>

#include "kinwave/errors.hpp"
#include "kinwave/roots.hpp"

namespace kinwave {

KineticParams::KineticParams(double chi_s_, double chi_n_)
    : chi_s(chi_s_), chi_n(chi_n_) {
  if (!(chi_s > 0.0 && chi_s < 0.5))
    throw InvalidInput("kinetics: chi_s must lie in (0, 1/2)");
  if (!(chi_n >= 0.0 && chi_n < 0.5))
    throw InvalidInput("kinetics: chi_n must lie in [0, 1/2)");
}

double KineticParams::rate(int z_sign, int vc_sign) const {
  if (z_sign == 0 || vc_sign == 0)
    throw InvalidInput("kinetics: rate needs nonzero signs");
  if (z_sign < 0) return vc_sign < 0 ? t_mm() : t_mp();
  return vc_sign < 0 ? t_pm() : t_pp();
}

namespace {

double run_length(const VelocityMeasure& m, double t_below, double t_above,
                  double c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = m.velocities[i] - c;
    acc += m.weights[i] * u / (u < 0.0 ? t_below : t_above);
  }
  return acc;
}

double locate_zero(const VelocityMeasure& m, double t_below, double t_above,
                   const char* which) {
  // The run length is positive near v_min and negative near v_max; it is
  // continuous and strictly decreasing, so the zero is interior.
  const double lo = m.v_min();
  const double hi = m.v_max();
  const double f_lo = run_length(m, t_below, t_above, lo);
  const double f_hi = run_length(m, t_below, t_above, hi);
  if (!(f_lo > 0.0 && f_hi < 0.0))
    throw NumericalError(std::string("critical_speeds: ") + which +
                         " not bracketed inside the velocity support");
  return bisect(
      [&](double c) { return run_length(m, t_below, t_above, c); }, lo, hi,
      f_lo, f_hi);
}

}  // namespace

double mean_run_length(const VelocityMeasure& m, const KineticParams& p,
                       double c) {
  return run_length(m, p.t_pm(), p.t_pp(), c);
}

double mean_run_length_minus(const VelocityMeasure& m, const KineticParams& p,
                             double c) {
  return run_length(m, p.t_mm(), p.t_mp(), c);
}

SpeedWindow critical_speeds(const VelocityMeasure& m, const KineticParams& p) {
  m.validate();
  SpeedWindow w;
  w.c_lo = locate_zero(m, p.t_pm(), p.t_pp(), "lower critical speed");
  w.c_hi = locate_zero(m, p.t_mm(), p.t_mp(), "upper critical speed");
  if (!(w.c_lo < w.c_hi))
    throw NumericalError("critical_speeds: window is empty");
  return w;
}

}  // namespace kinwave
