#pragma once

#include <cstddef>
#include <string>

namespace kinwave::simd {

// The arithmetic inner loops of the solver, as a function-pointer table so the
// implementation can be swapped at runtime. Two variants ship: a scalar
// reference and an AVX2 one. They are equivalence-tested against each other;
// results may differ by summation order only (a few ulp).
struct Kernels {
  // sum_i w[i] / (g[i] + s*lambda)      (dispersion sums, s = +-1)
  double (*shifted_reciprocal_sum)(const double* w, const double* g,
                                   std::size_t n, double lambda, double s);
  // sum_i w[i] * x[i]
  double (*dot)(const double* w, const double* x, std::size_t n);
  // sum_i w[i] * x[i] * y[i]
  double (*dot3)(const double* w, const double* x, const double* y,
                 std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double* y, const double* x, std::size_t n, double a);
  // x[i] *= a
  void (*scale)(double* x, std::size_t n, double a);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // sum_i |x[i] - y[i]|
  double (*l1_diff)(const double* x, const double* y, std::size_t n);
  // Semi-discrete upwind relaxation operator on one contiguous span of cells,
  // for one transport speed:
  //   L[i] = -(transport) + turn[i] - rate*f[i]
  // with the second-order one-sided stencil, s = |v-c| / (2 dz):
  //   pos: transport = s*(3 f[i] - 4 f[i-1] + f[i-2])
  //   neg: transport = s*(3 f[i] - 4 f[i+1] + f[i+2])
  // g1/g2 are the first/second upwind ghost values outside the span.
  void (*upwind_operator_pos)(double* out, const double* f, const double* turn,
                              std::size_t n, double s, double rate, double g1,
                              double g2);
  void (*upwind_operator_neg)(double* out, const double* f, const double* turn,
                              std::size_t n, double s, double rate, double g1,
                              double g2);

  const char* name;
};

extern const Kernels scalar_kernels;
#if KINWAVE_HAVE_AVX2
extern const Kernels avx2_kernels;
#endif

bool avx2_supported();

// Selected once per process. Honours KINWAVE_SIMD=scalar|avx2|auto; default
// auto (AVX2 when both built and supported by the CPU).
const Kernels& active();

// Override for tests. Pass nullptr to restore the automatic choice.
void set_active_for_testing(const Kernels* k);

std::string describe();

}  // namespace kinwave::simd
