#pragma once

#include <cmath>
#include <string>

#include "kinwave/errors.hpp"

namespace kinwave {

// Bisection on a bracket with known endpoint values. Runs until the bracket
// cannot shrink any further in double precision, so the returned root is exact
// to the last bit for monotone f. The endpoint values must have strict
// opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double f_hi,
              int max_iter = 200) {
  if (!(lo < hi)) throw NumericalError("bisect: empty bracket");
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
    throw NumericalError("bisect: non-finite endpoint value");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw NumericalError("bisect: endpoints do not bracket a sign change");

  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is one ulp wide
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Convenience overload evaluating the endpoints itself.
template <class F>
double bisect(F&& f, double lo, double hi, int max_iter = 200) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  return bisect(f, lo, hi, f_lo, f_hi, max_iter);
}

}  // namespace kinwave
