#include "kinwave/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "kinwave/errors.hpp"
#include "kinwave/linalg.hpp"

namespace kinwave {

std::vector<double> transfer_matrix(const ModeBasis& basis) {
  const std::size_t n = basis.measure.size();
  const std::size_t k = basis.k_below;
  if (basis.left.size() != k || basis.right.size() != n - k)
    throw InvalidInput("transfer_matrix: basis mode counts inconsistent");
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      m[i * n + j] = -basis.left[j].profile[i];
    for (std::size_t j = k; j < n; ++j)
      m[i * n + j] = basis.right[j - k].profile[i];
  }
  return m;
}

WaveProfile::WaveProfile(ModeBasis basis, std::vector<double> a,
                         std::vector<double> b)
    : basis_(std::move(basis)), a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != basis_.left.size() || b_.size() != basis_.right.size())
    throw InvalidInput("WaveProfile: weight count mismatch");
  const auto fill = [this](const std::vector<CaseMode>& modes,
                           const std::vector<double>& weights, SideData* out) {
    const auto& meas = basis_.measure;
    const std::size_t k = basis_.k_below;
    out->lambda.resize(modes.size());
    out->weight = weights;
    out->mean.resize(modes.size());
    out->mean_below.resize(modes.size());
    out->mean_above.resize(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) {
      out->lambda[j] = modes[j].lambda;
      out->mean[j] = modes[j].mean;
      double below = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        below += meas.weights[i] * modes[j].profile[i];
      out->mean_below[j] = below;
      out->mean_above[j] = modes[j].mean - below;
    }
  };
  fill(basis_.left, a_, &l_);
  fill(basis_.right, b_, &r_);
}

double WaveProfile::f(double z, std::size_t i) const {
  double acc = 0.0;
  if (z < 0.0) {
    for (std::size_t j = 0; j < a_.size(); ++j)
      acc += a_[j] * std::exp(l_.lambda[j] * z) * basis_.left[j].profile[i];
  } else {
    for (std::size_t j = 0; j < b_.size(); ++j)
      acc += b_[j] * std::exp(-r_.lambda[j] * z) * basis_.right[j].profile[i];
  }
  return acc;
}

double WaveProfile::rho(double z) const {
  double acc = 0.0;
  if (z < 0.0) {
    for (std::size_t j = 0; j < a_.size(); ++j)
      acc += a_[j] * std::exp(l_.lambda[j] * z) * l_.mean[j];
  } else {
    for (std::size_t j = 0; j < b_.size(); ++j)
      acc += b_[j] * std::exp(-r_.lambda[j] * z) * r_.mean[j];
  }
  return acc;
}

double WaveProfile::rho_side(double z, int vc_sign) const {
  double acc = 0.0;
  if (z < 0.0) {
    for (std::size_t j = 0; j < a_.size(); ++j)
      acc += a_[j] * std::exp(l_.lambda[j] * z) *
             (vc_sign < 0 ? l_.mean_below[j] : l_.mean_above[j]);
  } else {
    for (std::size_t j = 0; j < b_.size(); ++j)
      acc += b_[j] * std::exp(-r_.lambda[j] * z) *
             (vc_sign < 0 ? r_.mean_below[j] : r_.mean_above[j]);
  }
  return acc;
}

double WaveProfile::tumbling_density(double z) const {
  const auto& p = basis_.params;
  if (z < 0.0)
    return p.t_mm() * rho_side(z, -1) + p.t_mp() * rho_side(z, +1);
  return p.t_pm() * rho_side(z, -1) + p.t_pp() * rho_side(z, +1);
}

double WaveProfile::flux(double z) const {
  const auto& meas = basis_.measure;
  double acc = 0.0;
  for (std::size_t i = 0; i < meas.size(); ++i)
    acc += meas.weights[i] * (meas.velocities[i] - basis_.c) * f(z, i);
  return acc;
}

double WaveProfile::mass() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j)
    acc += a_[j] / l_.lambda[j] * l_.mean[j];
  for (std::size_t j = 0; j < b_.size(); ++j)
    acc += b_[j] / r_.lambda[j] * r_.mean[j];
  return acc;
}

double WaveProfile::continuity_residual() const {
  const std::size_t n = basis_.measure.size();
  double resid = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fl = 0.0, fr = 0.0;
    for (std::size_t j = 0; j < a_.size(); ++j)
      fl += a_[j] * basis_.left[j].profile[i];
    for (std::size_t j = 0; j < b_.size(); ++j)
      fr += b_[j] * basis_.right[j].profile[i];
    resid = std::max(resid, std::abs(fl - fr));
    scale = std::max({scale, std::abs(fl), std::abs(fr)});
  }
  return scale > 0.0 ? resid / scale : resid;
}

bool WaveProfile::positive_on(std::span<const double> zgrid) const {
  const std::size_t n = basis_.measure.size();
  for (double z : zgrid)
    for (std::size_t i = 0; i < n; ++i)
      if (!(f(z, i) > 0.0)) return false;
  return true;
}

WaveProfile solve_weights(ModeBasis basis) {
  const std::size_t n = basis.measure.size();
  const std::size_t k = basis.k_below;

  auto null = nullspace_rank_deficient_1(transfer_matrix(basis), n);

  std::vector<double> a(null.x.begin(), null.x.begin() + k);
  std::vector<double> b(null.x.begin() + k, null.x.end());

  WaveProfile profile(std::move(basis), std::move(a), std::move(b));
  const double m = profile.mass();
  if (m == 0.0) throw NumericalError("solve_weights: zero total mass");

  std::vector<double> a2 = profile.left_weights();
  std::vector<double> b2 = profile.right_weights();
  const double scale = 1.0 / m;
  for (double& x : a2) x *= scale;
  for (double& x : b2) x *= scale;
  WaveProfile scaled(profile.basis(), std::move(a2), std::move(b2));

  const auto grid = default_zgrid(scaled, 64, 8.0);
  if (!scaled.positive_on(grid))
    throw NumericalError(
        "solve_weights: profile not positive after sign fix (ansatz failure)");
  return scaled;
}

std::vector<double> default_zgrid(const WaveProfile& profile,
                                  std::size_t per_side, double extent) {
  const double zl = extent / profile.lambda_principal_left();
  const double zr = extent / profile.lambda_principal_right();
  std::vector<double> grid;
  grid.reserve(2 * per_side);
  for (std::size_t j = per_side; j >= 1; --j)
    grid.push_back(-zl * static_cast<double>(j) /
                   static_cast<double>(per_side));
  for (std::size_t j = 1; j <= per_side; ++j)
    grid.push_back(zr * static_cast<double>(j) /
                   static_cast<double>(per_side));
  return grid;
}

MonotonicityReport monotonicity_report(const WaveProfile& profile,
                                       std::span<const double> zgrid) {
  MonotonicityReport rep;
  std::vector<double> neg, pos;
  for (double z : zgrid) {
    if (z < 0.0)
      neg.push_back(z);
    else if (z > 0.0)
      pos.push_back(z);
  }
  std::sort(neg.begin(), neg.end());
  std::sort(pos.begin(), pos.end());

  const auto scan = [&](const std::vector<double>& zs, int vc_sign,
                        bool expect_decreasing, bool* flag,
                        const char* name) {
    for (std::size_t j = 0; j + 1 < zs.size(); ++j) {
      const double r0 = profile.rho_side(zs[j], vc_sign);
      const double r1 = profile.rho_side(zs[j + 1], vc_sign);
      const bool ok = expect_decreasing ? (r1 < r0) : (r1 > r0);
      if (!ok) {
        *flag = false;
        rep.violations.push_back({name, zs[j + 1]});
      }
    }
  };
  scan(pos, +1, true, &rep.rho_pos_above, "rho_pos_above");
  scan(pos, -1, true, &rep.rho_pos_below, "rho_pos_below");
  scan(neg, +1, false, &rep.rho_neg_above, "rho_neg_above");
  scan(neg, -1, false, &rep.rho_neg_below, "rho_neg_below");
  return rep;
}

}  // namespace kinwave
