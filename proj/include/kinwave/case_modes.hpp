#pragma once

#include <cstddef>
#include <vector>

#include "kinwave/kinetics.hpp"
#include "kinwave/measures.hpp"

namespace kinwave {

enum class Side { left, right };

// One elementary exponential solution of the stationary kinetic equation:
// e^{+lambda z} F(v) on the left (z<0), e^{-lambda z} F(v) on the right.
struct CaseMode {
  Side side = Side::left;
  double lambda = 0.0;          // spatial decay exponent, > 0
  std::vector<double> profile;  // F(v_i), strictly positive
  double mean = 0.0;            // <F> = sum_i w_i F(v_i)
};

// All modes for a given speed c with v_1 < ... < v_K < c < v_{K+1} < ... < v_N.
// Modes on each side are stored by increasing exponent, so [0] is the
// principal (slowest-decaying) mode.
struct ModeBasis {
  VelocityMeasure measure;
  KineticParams params;
  double c = 0.0;
  std::size_t k_below = 0;  // K
  std::vector<CaseMode> left;   // K modes
  std::vector<CaseMode> right;  // N-K modes

  ModeBasis(VelocityMeasure m, KineticParams p, double c_)
      : measure(std::move(m)), params(p), c(c_) {}
};

// Dispersion function whose positive roots are the admissible exponents:
//   left : Q_-(lambda) = sum_i w_i / (T_-(v_i-c)/(v_i-c) + lambda)
//   right: Q_+(lambda) = sum_i w_i / (T_+(v_i-c)/(v_i-c) - lambda)
// Q_- is decreasing and Q_+ increasing on each interval between poles.
double dispersion_value(const VelocityMeasure& m, const KineticParams& p,
                        double c, Side side, double lambda);

// Velocity profile of the mode with a validated exponent. Throws if any
// profile entry is nonpositive (the exponent is outside its bracket).
CaseMode mode_profile(const VelocityMeasure& m, const KineticParams& p,
                      double c, Side side, double lambda);

// Finds every root: exactly K on the left and N-K on the right, each located
// by bisection inside its interlacing bracket between consecutive poles.
// Requires c strictly inside the admissible window and min_i |c - v_i| above
// the collision tolerance 1e-9 * v0.
ModeBasis dispersion_roots(const VelocityMeasure& m, const KineticParams& p,
                           double c);

}  // namespace kinwave
