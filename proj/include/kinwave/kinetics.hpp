#pragma once

#include "kinwave/measures.hpp"

namespace kinwave {

// Chemotaxis parameters and the four-quadrant tumbling rate under the frozen
// travelling-wave sign pattern: the rate depends only on sign(z) (subscript)
// and sign(v - c) (superscript), never on a runtime gradient.
struct KineticParams {
  double chi_s;  // amplitude of the communication-signal bias, in (0, 1/2)
  double chi_n;  // amplitude of the nutrient bias, in [0, 1/2)

  KineticParams(double chi_s_, double chi_n_);

  double chi_plus() const { return chi_s - chi_n; }
  double chi_minus() const { return chi_s + chi_n; }

  double t_mm() const { return 1.0 + chi_s + chi_n; }  // z<0, v<c
  double t_mp() const { return 1.0 - chi_s - chi_n; }  // z<0, v>c
  double t_pm() const { return 1.0 - chi_s + chi_n; }  // z>0, v<c
  double t_pp() const { return 1.0 + chi_s - chi_n; }  // z>0, v>c

  // Rate selected by the signs of z and v-c; zero signs are rejected (the
  // lines z=0 and v=c are measure zero, the caller picks a side).
  double rate(int z_sign, int vc_sign) const;
};

// Admissible wave-speed window (c_lo, c_hi). Outside it one of the spatial
// tails stops decaying.
struct SpeedWindow {
  double c_lo;  // zero of the plus-side mean run length
  double c_hi;  // zero of the minus-side mean run length
};

// Mean algebraic run length in the moving frame, plus-side rates:
// R(c) = sum_i w_i (v_i - c) / T_+(v_i - c). Continuous, decreasing in c.
double mean_run_length(const VelocityMeasure& m, const KineticParams& p,
                       double c);

// Same with minus-side rates; its zero is the upper end of the window.
double mean_run_length_minus(const VelocityMeasure& m, const KineticParams& p,
                             double c);

// Locates both window ends by bisection (the run lengths are only piecewise
// smooth, with kinks at each v_i, so bisection is the safe choice).
SpeedWindow critical_speeds(const VelocityMeasure& m, const KineticParams& p);

}  // namespace kinwave
