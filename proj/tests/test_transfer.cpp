#include <doctest.h>

#include <cmath>
#include <random>

#include "kinwave/errors.hpp"
#include "kinwave/transfer.hpp"
#include "test_support.hpp"

using namespace kinwave;

TEST_CASE("left null vector annihilates the transfer matrix") {
  std::mt19937 rng(314159);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = testing::random_measure(rng, 8);
    const auto p = testing::random_params(rng);
    const auto w = critical_speeds(m, p);
    const double c = testing::admissible_speed(m, w, rng);
    const auto basis = dispersion_roots(m, p, c);
    const auto mat = transfer_matrix(basis);
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += m.weights[i] * (m.velocities[i] - c) * mat[i * n + j];
      CHECK(std::abs(acc) < 1e-11);
    }
  }
}

TEST_CASE("two velocities: rank-one matching solved by hand") {
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.3, 0.1);
  const double c = 0.05;
  const auto basis = dispersion_roots(m, p, c);
  const auto mat = transfer_matrix(basis);

  // both rows proportional: the 2x2 determinant vanishes
  CHECK(std::abs(mat[0] * mat[3] - mat[1] * mat[2]) < 1e-13);

  const auto profile = solve_weights(basis);
  const double a = profile.left_weights()[0];
  const double b = profile.right_weights()[0];
  const auto& fl = profile.basis().left[0].profile;
  const auto& fr = profile.basis().right[0].profile;
  CHECK(b / a == doctest::Approx(fl[0] / fr[0]).epsilon(1e-12));
  CHECK(b / a == doctest::Approx(fl[1] / fr[1]).epsilon(1e-12));
}

TEST_CASE("solved profiles satisfy the structural identities") {
  std::mt19937 rng(271828);
  int done = 0;
  while (done < 60) {
    const auto m = testing::random_measure(rng, 8);
    const auto p = testing::random_params(rng);
    const auto w = critical_speeds(m, p);
    const double c = testing::admissible_speed(m, w, rng);
    const auto profile = solve_weights(dispersion_roots(m, p, c));
    ++done;

    CHECK(profile.continuity_residual() < 1e-9);
    CHECK(std::abs(profile.mass() - 1.0) < 1e-10);

    for (int j = 1; j <= 20; ++j) {
      const double z = -2.0 + 4.0 * j / 21.0;
      CHECK(std::abs(profile.flux(z)) < 1e-10);
    }

    const auto grid = default_zgrid(profile, 200, 8.0);
    CHECK(profile.positive_on(grid));
    CHECK(monotonicity_report(profile, grid).clean());

    // rho is continuous across the origin
    CHECK(std::abs(profile.rho(-1e-300) - profile.rho(0.0)) <
          1e-9 * profile.rho(0.0));

    // I = T rho identity, split by side
    for (double z : {-1.3, -0.4, 0.2, 0.9}) {
      double direct = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i)
        direct += m.weights[i] *
                  p.rate(z < 0 ? -1 : +1, m.velocities[i] < c ? -1 : +1) *
                  profile.f(z, i);
      CHECK(profile.tumbling_density(z) ==
            doctest::Approx(direct).epsilon(1e-12));
    }

    // principal-mode sandwich for the tumbling density on the right
    const double lam = profile.lambda_principal_right();
    const double i0 = profile.tumbling_density(0.0);
    const double kappa = profile.kappa_plus();
    for (int j = 0; j <= 30; ++j) {
      const double z = j * (6.0 / lam) / 30.0;
      const double val = profile.tumbling_density(z);
      const double decay = std::exp(-lam * z);
      CHECK(val <= i0 * decay * (1.0 + 1e-11));
      CHECK(val >= kappa * decay * (1.0 - 1e-11));
    }
  }
}

TEST_CASE("two velocities: f itself is monotone on each side") {
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.35, 0.2);
  const auto w = critical_speeds(m, p);
  const auto profile = solve_weights(dispersion_roots(m, p, 0.5 * (w.c_lo + w.c_hi)));
  double prev0 = profile.f(0.0, 0), prev1 = profile.f(0.0, 1);
  for (int j = 1; j <= 50; ++j) {
    const double z = 5.0 * j / 50.0;
    CHECK(profile.f(z, 0) < prev0);
    CHECK(profile.f(z, 1) < prev1);
    prev0 = profile.f(z, 0);
    prev1 = profile.f(z, 1);
  }
}

TEST_CASE("monotonicity detector flags a corrupted profile") {
  const auto m = make_discrete({-1.0, -0.5, 0.5, 1.0}, {1, 1, 1, 1});
  const KineticParams p(0.48, 0.44);
  const auto basis = dispersion_roots(m, p, 0.2);
  const auto good = solve_weights(basis);

  auto a = good.left_weights();
  auto b = good.right_weights();
  b[1] = -b[1];  // flip a subdominant right weight
  const WaveProfile bad(good.basis(), std::move(a), std::move(b));
  const auto grid = default_zgrid(bad, 200, 8.0);
  const auto rep = monotonicity_report(bad, grid);
  CHECK_FALSE(rep.clean());
  CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("the coexistence point has clean monotonicity") {
  const auto m = make_discrete({-1.0, -0.5, 0.5, 1.0}, {1, 1, 1, 1});
  const KineticParams p(0.48, 0.44);
  const auto profile = solve_weights(dispersion_roots(m, p, 0.2));
  const auto grid = default_zgrid(profile, 400, 8.0);
  const auto rep = monotonicity_report(profile, grid);
  CHECK(rep.rho_pos_above);
  CHECK(rep.rho_pos_below);
  CHECK(rep.rho_neg_above);
  CHECK(rep.rho_neg_below);

  // far from the origin only the principal mode survives
  const double lam = profile.lambda_principal_right();
  const double zfar = 20.0 / lam;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double expected =
        profile.kappa_plus() * profile.basis().right.front().profile[i];
    CHECK(profile.f(zfar, i) * std::exp(lam * zfar) ==
          doctest::Approx(expected).epsilon(1e-6));
  }
}
