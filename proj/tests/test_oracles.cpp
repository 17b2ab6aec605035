#include <doctest.h>

#include <cmath>
#include <random>

#include "kinwave/errors.hpp"
#include "kinwave/fields.hpp"
#include "kinwave/oracles.hpp"
#include "kinwave/wave_finder.hpp"
#include "test_support.hpp"

using namespace kinwave;

TEST_CASE("macroscopic speed: residual, interval, golden value") {
  {  // no nutrient, no motion
    const MacroParams mp{0.3, 0.0, 1.0, 1.0, 1.0};
    CHECK(macro_speed(mp) == 0.0);
  }

  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> sd(0.05, 0.45);
  std::uniform_real_distribution<double> ad(0.1, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const MacroParams mp{sd(rng), sd(rng), ad(rng), ad(rng) * 0.05, 1.0};
    const double c = macro_speed(mp);
    CHECK(c > 0.0);
    CHECK(c < mp.chi_n);
    const double residual =
        mp.chi_n - c - mp.chi_s * c / std::sqrt(c * c + 4 * mp.alpha * mp.d_s);
    CHECK(std::abs(residual) < 1e-12);
  }

  // golden value, frozen from an independent in-test bisection
  const MacroParams mp{0.48, 0.44, 50.0, 0.5, 1.0};
  const auto res = [&](double c) {
    return mp.chi_n - c - mp.chi_s * c / std::sqrt(c * c + 100.0);
  };
  double lo = 0.0, hi = mp.chi_n;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (res(mid) > 0.0 ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  CHECK(std::abs(macro_speed(mp) - oracle) < 1e-12);
  CHECK(std::abs(macro_speed(mp) - 0.4199) < 1e-3);
}

TEST_CASE("macroscopic matching function") {
  const MacroParams mp{0.3, 0.2, 2.0, 0.5, 1.0};
  const double c = macro_speed(mp);
  CHECK(std::abs(macro_upsilon(mp, c)) < 1e-10);
  CHECK(macro_upsilon(mp, 0.0) > 0.0);
  CHECK(macro_upsilon(mp, mp.chi_n) < 0.0);

  // strictly decreasing across the admissible interval
  double prev = macro_upsilon(mp, 0.0);
  for (int j = 1; j <= 50; ++j) {
    const double cc = mp.chi_n * j / 50.0;
    const double u = macro_upsilon(mp, cc);
    CHECK(u < prev);
    prev = u;
  }

  CHECK_THROWS_AS(macro_upsilon(mp, 10.0), InvalidInput);
}

TEST_CASE("macroscopic density profile") {
  const MacroParams mp{0.3, 0.2, 2.0, 0.5, 1.0};
  const double c = 0.1;
  CHECK(macro_density(mp, c, 0.0) == 1.0);
  const double lp = mp.lambda_plus(c);
  CHECK(macro_density(mp, c, 1.0 / lp) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  // two-velocity kinetic exponents match the macroscopic ones with the
  // fitted diffusivity d_rho = 1 - c^2; the window at chi = 0.05/0.02 is
  // (-0.03, 0.07)
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.05, 0.02);
  const double cc = 0.02;
  const MacroParams fit{0.05, 0.02, 2.0, 0.5, 1.0 - cc * cc};
  const auto basis = dispersion_roots(m, p, cc);
  CHECK(std::abs(basis.right[0].lambda - fit.lambda_plus(cc)) <
        0.1 * fit.lambda_plus(cc));
  CHECK(std::abs(basis.left[0].lambda - fit.lambda_minus(cc)) <
        0.1 * fit.lambda_minus(cc));
}

TEST_CASE("relaxation settles on the mode profile") {
  const double L = 30.0;
  const std::size_t nz = 1500;
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.45, 0.05);
  const double c = 0.1;
  const double dt = 0.4 * (2.0 * L / nz) / 1.1;

  const auto profile = solve_weights(dispersion_roots(m, p, c));

  // random positive initial data
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ud(0.5, 1.5);
  std::vector<std::vector<double>> init(2, std::vector<double>(nz));
  for (auto& row : init)
    for (auto& x : row) x = ud(rng);

  const auto r = relax_to_steady(m, p, c, L, nz, dt, 1200.0, &init, 1e-10);
  CHECK(l1_distance(r, m, profile) < 1e-3);
  CHECK(r.residual_history.back() < 1e-9);

  // conserved interface flux, interior cells
  for (std::size_t mc = nz / 8; mc < nz - nz / 8; mc += 37)
    CHECK(std::abs(r.interface_flux(m, c, mc)) < 1e-6);

  CHECK(r.mass(m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relaxation regression with eight velocities") {
  const double L = 30.0;
  const std::size_t nz = 1500;
  const auto m = make_discrete({-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0},
                               {1, 1, 1, 1, 1, 1, 1, 1});
  const KineticParams p(0.45, 0.05);
  const double c = 0.05;
  const double dt = 0.4 * (2.0 * L / nz) / 1.05;

  const auto profile = solve_weights(dispersion_roots(m, p, c));
  const auto r = relax_to_steady(m, p, c, L, nz, dt, 1500.0, nullptr, 1e-10);
  CHECK(l1_distance(r, m, profile) < 1e-3);
}

TEST_CASE("relaxation regression with skewed weights") {
  const double L = 30.0;
  const std::size_t nz = 1500;
  const auto m = make_discrete({-1.0, -0.4, 0.55, 1.0}, {2.0, 1.0, 1.0, 3.0});
  const KineticParams p(0.45, 0.05);
  const double c = 0.1;
  const double dt = 0.4 * (2.0 * L / nz) / 1.1;

  const auto profile = solve_weights(dispersion_roots(m, p, c));
  const auto r = relax_to_steady(m, p, c, L, nz, dt, 1500.0, nullptr, 1e-10);
  CHECK(l1_distance(r, m, profile) < 2e-3);
}

TEST_CASE("relaxation started at the mode profile stays there") {
  const double L = 30.0;
  const std::size_t nz = 1500;
  const auto m = make_discrete({-1.0, -0.5, 0.5, 1.0}, {1, 1, 1, 1});
  const KineticParams p(0.45, 0.05);
  const double c = 0.1;
  const double dt = 0.4 * (2.0 * L / nz) / 1.1;

  const auto profile = solve_weights(dispersion_roots(m, p, c));
  std::vector<double> z(nz);
  for (std::size_t mc = 0; mc < nz; ++mc)
    z[mc] = -L + (static_cast<double>(mc) + 0.5) * 2.0 * L / nz;
  const auto init = sample_profile(profile, z);

  const auto r = relax_to_steady(m, p, c, L, nz, dt, 1200.0, &init, 1e-9);
  // drift is bounded by the spatial discretization error of the start point
  CHECK(l1_distance(r, m, profile) < 1e-3);
  // and the march ends at the discrete fixed point
  CHECK(r.residual_history.back() < 1e-8);
}

TEST_CASE("relaxation input validation") {
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.3, 0.1);
  // CFL violation
  CHECK_THROWS_AS(relax_to_steady(m, p, 0.1, 30.0, 100, 1.0, 10.0),
                  InvalidInput);
  // divergence guard: unstable ratio blows up and is reported
  CHECK_THROWS_AS(
      relax_to_steady(m, p, 0.1, 30.0, 64, 0.99 * 60.0 / 64.0 / 1.1, 2000.0),
      NumericalError);
}

TEST_CASE("overshoot appears at the largest velocities only") {
  {  // two velocities: single exponential per side, no overshoot
    const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
    const KineticParams p(0.3, 0.0);
    const auto profile = solve_weights(dispersion_roots(m, p, 0.0));
    const auto rep = overshoot_detect(profile, 12.0, 3001);
    CHECK_FALSE(rep.any());
  }
  {  // the cluster with strong bias overshoots at the top velocities
    DensitySpec d;
    d.kind = DensityKind::uniform;
    const auto m = quadrature(d, 32);
    const KineticParams p(0.48, 0.0);
    const auto wave = stationary_cluster(m, p, 50.0, 0.5);
    const double half = 6.0 / wave.profile.lambda_principal_right();
    const auto rep = overshoot_detect(wave.profile, half, 4001);
    REQUIRE(rep.any());
    // only large velocities, and the top one is among them
    for (std::size_t i : rep.overshooting) CHECK(m.velocities[i] > 0.5);
    CHECK(rep.overshooting.back() == m.size() - 1);

    // the integrated density still decreases to the right
    const auto grid = default_zgrid(wave.profile, 300, 8.0);
    CHECK(monotonicity_report(wave.profile, grid).clean());
  }
}

TEST_CASE("tumbling density dominates the incoming flank") {
  // T_+^- f(z, v) < I_+(z) for v < c, z > 0
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testing::random_measure(rng, 6);
    const auto p = testing::random_params(rng);
    const auto w = critical_speeds(m, p);
    const double c = testing::admissible_speed(m, w, rng);
    const auto profile = solve_weights(dispersion_roots(m, p, c));
    for (double z : {0.1, 0.6, 1.8, 4.0}) {
      const double big_i = profile.tumbling_density(z);
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m.velocities[i] < c)
          CHECK(p.t_pm() * profile.f(z, i) < big_i);
    }
  }
}
