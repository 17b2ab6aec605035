#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kinwave/fields.hpp"
#include "kinwave/transfer.hpp"

namespace kinwave {

// Reaction-diffusion and nutrient parameters used when assembling waves.
struct FieldParams {
  double alpha = 1.0;
  double d_s = 1.0;
  double gamma = 1.0;
  double d_n = 1.0;
  double n_plus = 1.0;
};

// Full matching-function evaluation at one speed: dispersion roots, transfer
// solve, modal upsilon. Throws NumericalError when the pipeline fails.
double evaluate_upsilon(const VelocityMeasure& m, const KineticParams& p,
                        double c, double alpha, double d_s);

struct JumpRecord {
  std::size_t v_index = 0;
  double v = 0.0;
  double upsilon_below = 0.0;  // limit c -> v-
  double upsilon_above = 0.0;  // limit c -> v+
  // Amplitude carried by the disappearing mode on each side of the swap.
  double transferred_from_below = 0.0;  // lim b_{K+1} <F_+^{K+1}>
  double transferred_from_above = 0.0;  // lim a_{K+1} <F_-^{K+1}>
  double jump() const { return upsilon_above - upsilon_below; }
};

struct UpsilonScan {
  double c_lo = 0.0, c_hi = 0.0;        // scanned window
  std::vector<double> c_values;          // increasing, clear of every v_i
  std::vector<double> upsilon_values;    // NaN where the solve failed
  std::vector<int> interval_ids;         // continuity interval per point
  std::vector<double> interval_boundaries;  // interior v_i
  std::vector<JumpRecord> jumps;         // one-sided limits at each boundary
};

// Scans upsilon over (max(0, c_*), c^*) with step dc (dc <= 0 selects the
// default: min velocity gap / 30, floored at 1e-4). Grid points colliding
// with a v_i are displaced by 1e-6 * v0. Evaluations run in parallel and are
// merged in c order.
UpsilonScan upsilon_scan(const VelocityMeasure& m, const KineticParams& p,
                         double alpha, double d_s, double dc = 0.0,
                         unsigned threads = 1);

struct TravellingWave {
  enum class Kind { stationary_cluster, travelling };
  double c = 0.0;
  double upsilon_value = 0.0;
  WaveProfile profile;
  FieldTable s;
  std::optional<NutrientSolution> n;
  AnsatzReport ansatz;
  bool ansatz_valid = false;
  Kind kind = Kind::travelling;
};

// Refines every sign change of upsilon strictly inside a continuity interval
// to |upsilon| < 1e-10 and assembles the waves. Waves failing the ansatz
// check are returned flagged, never dropped. An empty list is a legitimate
// outcome. Sign changes across an interval boundary produce no wave (that is
// the jump crossing of a discontinuous upsilon).
std::vector<TravellingWave> find_waves(const UpsilonScan& scan,
                                       const VelocityMeasure& m,
                                       const KineticParams& p,
                                       const FieldParams& fp);

// One-sided limits at a discrete velocity interior to the speed window, by
// evaluation at v -+ eps for eps in {1e-4, 1e-5, 1e-6} and linear Richardson
// extrapolation; the two extrapolations must agree to 5% relative.
JumpRecord jump_at(const VelocityMeasure& m, const KineticParams& p,
                   std::size_t v_index, double alpha, double d_s);

// The symmetric c = 0 solution for chi_n = 0 on a symmetric measure. The
// basis is mirrored exactly and the weights are symmetrized, so
// f(z, v_i) = f(-z, v_{N+1-i}) holds to rounding.
TravellingWave stationary_cluster(const VelocityMeasure& m,
                                  const KineticParams& p, double alpha,
                                  double d_s);

// Assembles a complete wave (profile, fields, ansatz flags) at a given speed.
TravellingWave assemble_wave(const VelocityMeasure& m, const KineticParams& p,
                             double c, const FieldParams& fp);

}  // namespace kinwave
