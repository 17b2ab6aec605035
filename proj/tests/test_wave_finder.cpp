#include <doctest.h>

#include <cmath>
#include <random>

#include "kinwave/errors.hpp"
#include "kinwave/wave_finder.hpp"
#include "test_support.hpp"

using namespace kinwave;

namespace {

const FieldParams kFig8Fields{50.0, 0.5, 1.0, 1.0, 1.0};

VelocityMeasure four_velocities(double vmin) {
  return make_discrete({-1.0, -vmin, vmin, 1.0}, {1, 1, 1, 1});
}

}  // namespace

TEST_CASE("coexistence scan: sign structure and the positive jump") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.44);
  const auto scan = upsilon_scan(m, p, 50.0, 0.5, 0.0, 2);

  REQUIRE(scan.interval_boundaries.size() == 1);
  CHECK(scan.interval_boundaries[0] == 0.5);
  CHECK(scan.c_lo == 0.0);

  // no scan point touches a discrete velocity
  for (double c : scan.c_values)
    for (double v : m.velocities) CHECK(std::abs(c - v) >= 1e-6);

  // the matching function changes sign at least twice over the window
  int flips = 0;
  for (std::size_t j = 0; j + 1 < scan.c_values.size(); ++j)
    if (scan.upsilon_values[j] * scan.upsilon_values[j + 1] < 0.0) ++flips;
  CHECK(flips >= 2);

  // positive jump across v = 0.5
  REQUIRE(scan.jumps.size() == 1);
  CHECK(scan.jumps[0].upsilon_above > scan.jumps[0].upsilon_below);
  CHECK(scan.jumps[0].jump() > 0.0);
}

TEST_CASE("find_waves on the coexistence set") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.44);
  const auto scan = upsilon_scan(m, p, 50.0, 0.5, 0.0, 2);
  const auto waves = find_waves(scan, m, p, kFig8Fields);

  REQUIRE(waves.size() == 2);
  CHECK(std::abs(waves[0].c - 0.2) < 0.05);
  CHECK(std::abs(waves[1].c - 0.6) < 0.05);
  for (const auto& w : waves) {
    CHECK(std::abs(w.upsilon_value) < 1e-10);
    CHECK(w.ansatz_valid);
    CHECK(w.kind == TravellingWave::Kind::travelling);
    CHECK(w.n.has_value());

    // every accepted wave carries the full set of structural properties
    for (double z : {-2.0, -0.7, 0.4, 1.9})
      CHECK(std::abs(w.profile.flux(z)) < 1e-10);
    const auto grid = default_zgrid(w.profile, 200, 8.0);
    CHECK(monotonicity_report(w.profile, grid).clean());
    CHECK(w.ansatz.s_unimodal);
    CHECK(w.ansatz.s_peak_at_origin);
    CHECK(w.ansatz.n_checked);
    CHECK(w.ansatz.n_increasing);
  }
}

TEST_CASE("roots are scan-resolution independent") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.44);
  const auto scan1 = upsilon_scan(m, p, 50.0, 0.5, 0.02, 2);
  const auto scan2 = upsilon_scan(m, p, 50.0, 0.5, 0.01, 2);
  const auto w1 = find_waves(scan1, m, p, kFig8Fields);
  const auto w2 = find_waves(scan2, m, p, kFig8Fields);
  REQUIRE(w1.size() == w2.size());
  for (std::size_t k = 0; k < w1.size(); ++k)
    CHECK(std::abs(w1[k].c - w2[k].c) < 1e-8);
}

TEST_CASE("scan refinement shrinks the gaps between neighbours") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.44);
  double prev_gap = 0.0;
  bool first = true;
  for (double dc : {0.04, 0.02, 0.01}) {
    const auto scan = upsilon_scan(m, p, 50.0, 0.5, dc, 2);
    double gap = 0.0;
    for (std::size_t j = 0; j + 1 < scan.c_values.size(); ++j)
      if (scan.interval_ids[j] == scan.interval_ids[j + 1])
        gap = std::max(gap, std::abs(scan.upsilon_values[j + 1] -
                                     scan.upsilon_values[j]));
    if (!first) CHECK(gap < prev_gap);
    prev_gap = gap;
    first = false;
  }
}

TEST_CASE("one-sided limits at the interior velocity") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.44);
  const auto rec = jump_at(m, p, 2, 50.0, 0.5);

  CHECK(rec.v == 0.5);
  CHECK(rec.jump() > 0.0);

  // transferred amplitude against its explicit lower bound
  const auto near = solve_weights(dispersion_roots(m, p, 0.5 - 1e-6));
  const double rho_minus0 = near.rho_side(0.0, -1);
  const double bound =
      m.weights[2] * 4.0 * p.chi_s * rho_minus0 / (p.t_pp() * p.t_mp());
  CHECK(rec.transferred_from_below >= bound - 0.01);
  CHECK(rec.transferred_from_below > 0.0);
  CHECK(rec.transferred_from_above > 0.0);

  // the exploding exponent grows as c approaches the velocity
  const auto b4 = dispersion_roots(m, p, 0.5 - 1e-4);
  const auto b5 = dispersion_roots(m, p, 0.5 - 1e-5);
  CHECK(b5.right.back().lambda > b4.right.back().lambda);

  CHECK_THROWS_AS(jump_at(m, p, 0, 50.0, 0.5), InvalidInput);  // v = -1
}

TEST_CASE("empty window is rejected, empty result is legitimate") {
  // chi_n = 0, two velocities: upsilon is strictly negative on (0, c_hi)
  const auto m = make_discrete({-1.0, 1.0}, {1.0, 1.0});
  const KineticParams p(0.3, 0.0);
  const auto scan = upsilon_scan(m, p, 1.0, 1.0, 0.0, 1);
  const auto waves = find_waves(scan, m, p, FieldParams{1.0, 1.0, 1, 1, 1});
  CHECK(waves.empty());
  for (double u : scan.upsilon_values) CHECK(u < 0.0);
}

TEST_CASE("upsilon at zero speed vanishes for the symmetric problem") {
  const auto m = four_velocities(0.5);
  const KineticParams p(0.48, 0.0);
  CHECK(std::abs(evaluate_upsilon(m, p, 0.0, 50.0, 0.5)) < 1e-10);
}

TEST_CASE("stationary cluster: symmetry, decay, and validity") {
  DensitySpec d;
  d.kind = DensityKind::uniform;
  const auto m = quadrature(d, 64);
  const KineticParams p(0.48, 0.0);
  const auto wave = stationary_cluster(m, p, 50.0, 0.5);

  CHECK(wave.kind == TravellingWave::Kind::stationary_cluster);
  CHECK(wave.ansatz_valid);
  CHECK(std::abs(wave.upsilon_value) < 1e-10);

  // exact mirror symmetry f(z, v_i) = f(-z, v_{N+1-i})
  const std::size_t n = m.size();
  double sym = 0.0;
  for (double z : {0.13, 0.77, 2.9, 8.1})
    for (std::size_t i = 0; i < n; ++i)
      sym = std::max(sym, std::abs(wave.profile.f(z, i) -
                                   wave.profile.f(-z, n - 1 - i)));
  CHECK(sym < 1e-10);

  // far-field convergence to the principal mode
  const double lam = wave.profile.lambda_principal_right();
  const double zfar = 20.0 / lam;
  for (std::size_t i = 0; i < n; ++i) {
    const double expected =
        wave.profile.kappa_plus() * wave.profile.basis().right.front().profile[i];
    CHECK(wave.profile.f(zfar, i) * std::exp(lam * zfar) ==
          doctest::Approx(expected).epsilon(1e-6));
  }

  // preconditions
  const auto asym = make_discrete({-1.0, 0.2, 1.0}, {1, 1, 1});
  CHECK_THROWS_AS(stationary_cluster(asym, p, 50.0, 0.5), InvalidInput);
  const KineticParams biased(0.48, 0.1);
  CHECK_THROWS_AS(stationary_cluster(m, biased, 50.0, 0.5), InvalidInput);
}

TEST_CASE("four-velocity family: one wave or two depending on the gap") {
  const KineticParams p(0.48, 0.44);
  {
    const auto m = four_velocities(0.1);
    const auto scan = upsilon_scan(m, p, 50.0, 0.5, 0.0, 2);
    const auto waves = find_waves(scan, m, p, kFig8Fields);
    REQUIRE(waves.size() == 1);
    CHECK(std::abs(waves[0].c - 0.4) < 0.05);
  }
  {
    const auto m = four_velocities(0.8);
    const auto scan = upsilon_scan(m, p, 50.0, 0.5, 0.0, 2);
    const auto waves = find_waves(scan, m, p, kFig8Fields);
    REQUIRE(waves.size() == 1);
    CHECK(std::abs(waves[0].c - 0.4) < 0.05);
  }
}
