#include "kinwave/wave_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "kinwave/errors.hpp"
#include "kinwave/kinetics.hpp"

namespace kinwave {

namespace {

constexpr double kRootTol = 1e-10;        // |upsilon| at an accepted root
constexpr double kScanDisplace = 1e-6;    // grid displacement, scaled by v0
constexpr double kFieldExtent = 28.0;     // e^{-28} < 1e-12

double field_half_width(const WaveProfile& profile) {
  const double lam = std::min(profile.lambda_principal_left(),
                              profile.lambda_principal_right());
  return kFieldExtent / lam;
}

std::vector<double> symmetric_grid(double half_width, std::size_t nodes) {
  // odd node count puts a node exactly at z = 0
  if (nodes % 2 == 0) ++nodes;
  std::vector<double> z(nodes);
  const double h = 2.0 * half_width / static_cast<double>(nodes - 1);
  for (std::size_t j = 0; j < nodes; ++j)
    z[j] = -half_width + h * static_cast<double>(j);
  z[(nodes - 1) / 2] = 0.0;
  return z;
}

constexpr std::size_t kFieldNodes = 4097;

}  // namespace

double evaluate_upsilon(const VelocityMeasure& m, const KineticParams& p,
                        double c, double alpha, double d_s) {
  auto profile = solve_weights(dispersion_roots(m, p, c));
  return upsilon(profile, alpha, d_s);
}

TravellingWave assemble_wave(const VelocityMeasure& m, const KineticParams& p,
                             double c, const FieldParams& fp) {
  auto profile = solve_weights(dispersion_roots(m, p, c));
  const double ups = upsilon(profile, fp.alpha, fp.d_s);
  // The nutrient log-derivative decays like e^{-(c/d_n) z} on the right,
  // which can be slower than the density; the domain must cover that tail.
  double half = field_half_width(profile);
  if (c > 0.0)
    half = std::max(half, std::min(kFieldExtent * fp.d_n / c, 2000.0));
  const auto grid = symmetric_grid(half, kFieldNodes);
  auto s = signal_profile(profile, fp.alpha, fp.d_s, grid);

  std::optional<NutrientSolution> n;
  if (c > 0.0)
    n = nutrient_profile(profile, fp.gamma, fp.d_n, half, kFieldNodes,
                         fp.n_plus);

  const AnsatzReport ansatz = ansatz_check(s, n ? &*n : nullptr);
  const bool cluster = p.chi_n == 0.0 && std::abs(c) < 1e-14;

  TravellingWave wave{c,
                      ups,
                      std::move(profile),
                      std::move(s),
                      std::move(n),
                      ansatz,
                      ansatz.valid && !(c <= 0.0 && p.chi_n > 0.0),
                      cluster ? TravellingWave::Kind::stationary_cluster
                              : TravellingWave::Kind::travelling};
  return wave;
}

UpsilonScan upsilon_scan(const VelocityMeasure& m, const KineticParams& p,
                         double alpha, double d_s, double dc,
                         unsigned threads) {
  m.validate();
  const SpeedWindow window = critical_speeds(m, p);
  UpsilonScan scan;
  scan.c_lo = std::max(0.0, window.c_lo);
  scan.c_hi = window.c_hi;
  if (!(scan.c_lo < scan.c_hi))
    throw InvalidInput("upsilon_scan: empty speed window");

  if (dc <= 0.0) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
      min_gap = std::min(min_gap, m.velocities[i + 1] - m.velocities[i]);
    dc = std::max(min_gap / 30.0, 1e-4);
  }

  const double v0 = m.v0();
  const double displaced = kScanDisplace * v0;
  for (double v : m.velocities)
    if (v > scan.c_lo && v < scan.c_hi) scan.interval_boundaries.push_back(v);

  // points hugging the window ends have a vanishing principal exponent and
  // nothing to offer; keep a small relative margin
  const double edge = 1e-6 * (scan.c_hi - scan.c_lo);
  for (std::size_t j = 0;; ++j) {
    double c = scan.c_lo + (static_cast<double>(j) + 0.5) * dc;
    if (c >= scan.c_hi - edge) break;
    for (double v : m.velocities) {
      if (std::abs(c - v) < displaced) {
        c = c <= v ? v - displaced : v + displaced;
        break;
      }
    }
    if (c <= scan.c_lo + edge || c >= scan.c_hi - edge) continue;
    if (!scan.c_values.empty() && c <= scan.c_values.back()) continue;
    scan.c_values.push_back(c);
  }

  scan.upsilon_values.assign(scan.c_values.size(),
                             std::numeric_limits<double>::quiet_NaN());
  scan.interval_ids.resize(scan.c_values.size());
  for (std::size_t j = 0; j < scan.c_values.size(); ++j) {
    int id = 0;
    for (double v : scan.interval_boundaries)
      if (v < scan.c_values[j]) ++id;
    scan.interval_ids[j] = id;
  }

  const auto worker = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t j = begin; j < scan.c_values.size(); j += stride) {
      try {
        scan.upsilon_values[j] =
            evaluate_upsilon(m, p, scan.c_values[j], alpha, d_s);
      } catch (const NumericalError&) {
        // leave NaN; the finder skips the point
      }
    }
  };
  const unsigned nt = std::max(1u, threads);
  if (nt == 1 || scan.c_values.size() < 2 * nt) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker, t, nt);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = m.velocities[i];
    if (v - displaced > scan.c_lo + edge && v + displaced < scan.c_hi - edge) {
      JumpRecord rec;
      rec.v_index = i;
      rec.v = v;
      try {
        rec.upsilon_below = evaluate_upsilon(m, p, v - displaced, alpha, d_s);
        rec.upsilon_above = evaluate_upsilon(m, p, v + displaced, alpha, d_s);
      } catch (const NumericalError&) {
        continue;
      }
      scan.jumps.push_back(rec);
    }
  }
  return scan;
}

std::vector<TravellingWave> find_waves(const UpsilonScan& scan,
                                       const VelocityMeasure& m,
                                       const KineticParams& p,
                                       const FieldParams& fp) {
  std::vector<TravellingWave> waves;
  for (std::size_t j = 0; j + 1 < scan.c_values.size(); ++j) {
    if (scan.interval_ids[j] != scan.interval_ids[j + 1]) continue;
    const double u0 = scan.upsilon_values[j];
    const double u1 = scan.upsilon_values[j + 1];
    if (!std::isfinite(u0) || !std::isfinite(u1)) continue;
    if (u0 == 0.0) continue;  // handled as the left point of the previous pair
    if (!(u0 * u1 <= 0.0)) continue;

    double lo = scan.c_values[j], hi = scan.c_values[j + 1];
    double f_lo = u0;
    double root = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double um;
      try {
        um = evaluate_upsilon(m, p, mid, fp.alpha, fp.d_s);
      } catch (const NumericalError&) {
        break;
      }
      if (std::abs(um) < kRootTol) {
        root = mid;
        break;
      }
      if ((um > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = um;
      } else {
        hi = mid;
      }
    }
    if (!std::isfinite(root)) continue;
    waves.push_back(assemble_wave(m, p, root, fp));
  }
  return waves;
}

namespace {

struct OneSidedSample {
  double upsilon = 0.0;
  double transferred = 0.0;  // weight * <F> of the largest-exponent mode
};

OneSidedSample sample_near(const VelocityMeasure& m, const KineticParams& p,
                           double c, double alpha, double d_s, bool below) {
  auto profile = solve_weights(dispersion_roots(m, p, c));
  OneSidedSample s;
  s.upsilon = upsilon(profile, alpha, d_s);
  const auto& basis = profile.basis();
  if (below) {
    // disappearing right mode: largest lambda_+
    s.transferred =
        profile.right_weights().back() * basis.right.back().mean;
  } else {
    // appearing left mode: largest lambda_-
    s.transferred = profile.left_weights().back() * basis.left.back().mean;
  }
  return s;
}

// Linear Richardson from samples at eps and eps/10: (10 f(e/10) - f(e)) / 9.
double extrapolate(double coarse, double fine) {
  return (10.0 * fine - coarse) / 9.0;
}

double consistent_limit(double v_coarse, double v_mid, double v_fine,
                        const char* what) {
  const double e12 = extrapolate(v_coarse, v_mid);
  const double e23 = extrapolate(v_mid, v_fine);
  const double tol = 0.05 * std::max(std::abs(e12), std::abs(e23)) + 1e-10;
  if (std::abs(e23 - e12) > tol)
    throw NumericalError(std::string("jump_at: one-sided limit of ") + what +
                         " is not stabilizing");
  return e23;
}

}  // namespace

JumpRecord jump_at(const VelocityMeasure& m, const KineticParams& p,
                   std::size_t v_index, double alpha, double d_s) {
  if (v_index >= m.size()) throw InvalidInput("jump_at: bad velocity index");
  const SpeedWindow window = critical_speeds(m, p);
  const double v = m.velocities[v_index];
  if (!(v > window.c_lo && v < window.c_hi))
    throw InvalidInput("jump_at: velocity not interior to the speed window");

  const double eps[3] = {1e-4, 1e-5, 1e-6};
  OneSidedSample below[3], above[3];
  for (int k = 0; k < 3; ++k) {
    below[k] = sample_near(m, p, v - eps[k], alpha, d_s, true);
    above[k] = sample_near(m, p, v + eps[k], alpha, d_s, false);
  }

  JumpRecord rec;
  rec.v_index = v_index;
  rec.v = v;
  rec.upsilon_below = consistent_limit(below[0].upsilon, below[1].upsilon,
                                       below[2].upsilon, "upsilon (below)");
  rec.upsilon_above = consistent_limit(above[0].upsilon, above[1].upsilon,
                                       above[2].upsilon, "upsilon (above)");
  rec.transferred_from_below =
      consistent_limit(below[0].transferred, below[1].transferred,
                       below[2].transferred, "transferred amplitude (below)");
  rec.transferred_from_above =
      consistent_limit(above[0].transferred, above[1].transferred,
                       above[2].transferred, "transferred amplitude (above)");
  return rec;
}

TravellingWave stationary_cluster(const VelocityMeasure& m,
                                  const KineticParams& p, double alpha,
                                  double d_s) {
  if (p.chi_n != 0.0)
    throw InvalidInput("stationary_cluster: requires chi_n = 0");
  if (!m.symmetric)
    throw InvalidInput("stationary_cluster: requires a symmetric measure");

  ModeBasis basis = dispersion_roots(m, p, 0.0);
  const std::size_t n = m.size();
  if (basis.left.size() != basis.right.size())
    throw NumericalError("stationary_cluster: unbalanced mode counts");

  // Mirror the right modes onto the left so the symmetry
  // f(z, v_i) = f(-z, v_{N+1-i}) holds exactly in floating point.
  for (std::size_t j = 0; j < basis.left.size(); ++j) {
    basis.left[j].lambda = basis.right[j].lambda;
    basis.left[j].mean = basis.right[j].mean;
    for (std::size_t i = 0; i < n; ++i)
      basis.left[j].profile[i] = basis.right[j].profile[n - 1 - i];
  }

  WaveProfile solved = solve_weights(basis);
  std::vector<double> a = solved.left_weights();
  std::vector<double> b = solved.right_weights();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double avg = 0.5 * (a[j] + b[j]);
    a[j] = avg;
    b[j] = avg;
  }
  WaveProfile symmetric(solved.basis(), std::move(a), std::move(b));
  const double mass = symmetric.mass();
  std::vector<double> a2 = symmetric.left_weights();
  std::vector<double> b2 = symmetric.right_weights();
  for (double& x : a2) x /= mass;
  for (double& x : b2) x /= mass;
  WaveProfile profile(symmetric.basis(), std::move(a2), std::move(b2));

  const double ups = upsilon(profile, alpha, d_s);
  const double half = field_half_width(profile);
  const auto grid = symmetric_grid(half, kFieldNodes);
  auto s = signal_profile(profile, alpha, d_s, grid);
  const AnsatzReport ansatz = ansatz_check(s, nullptr);

  TravellingWave wave{0.0,
                      ups,
                      std::move(profile),
                      std::move(s),
                      std::nullopt,
                      ansatz,
                      ansatz.valid,
                      TravellingWave::Kind::stationary_cluster};
  return wave;
}

}  // namespace kinwave
