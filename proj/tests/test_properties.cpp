#include <doctest.h>

#include "nls/front_init.hpp"
#include "nls/properties.hpp"
#include "nls/runner.hpp"
#include "nls/velocity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace nls;

namespace {

VelocityParams row_params(double amplitude, double curvature_coef) {
  return make_velocity_params(Model::tomographic, make_constant_amplitude(amplitude),
                              make_constant_weight(1.0), curvature_coef, 0.0);
}

} // namespace

TEST_CASE("slice ball coefficient matches closed-form unit-ball measures") {
  const double pi = std::acos(-1.0);
  // 1-d slice: |B| = 2, exponent 1
  CHECK(subsolution_ball_coef(2, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(subsolution_ball_coef(3, 2) == doctest::Approx(2.0).epsilon(1e-15));
  // 2-d slice: |B| = pi, exponent 1/2
  CHECK(subsolution_ball_coef(3, 1) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
  // 3-d slice: |B| = 4 pi / 3, exponent 1/3
  CHECK(subsolution_ball_coef(4, 1) == doctest::Approx(std::cbrt(4.0 * pi / 3.0)).epsilon(1e-15));
}

TEST_CASE("drift bound evaluates the closed-form threshold") {
  // L1 = L2 = 1, N = 2, k = 1: -(3 + 2*2 + 2*2*7) = -35, and the rounding of
  // the slice coefficient lands the sum on the integer exactly
  SubsolutionParams unit{1.0, 1.0, 2, 1, -35.0};
  CHECK(subsolution_required_bound(unit) == -35.0);

  // independent hand evaluation for a second parameter set
  const double pi = std::acos(-1.0);
  SubsolutionParams other{0.5, 2.0, 3, 1, -100.0};
  double want = -(3.0 * 0.5 + 2.0 * std::sqrt(pi) * 0.5 + 2.0 * 3.0 * 9.0);
  CHECK(subsolution_required_bound(other) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("barrier parameter factory enforces the admissible range") {
  SubsolutionParams sp = make_subsolution_params(1.0, 1.0, 2, 1, -35.0);
  CHECK(sp.L1 == 1.0);
  CHECK(sp.L2 == 1.0);
  CHECK(sp.N == 2);
  CHECK(sp.k == 1);
  CHECK(sp.A == -35.0);
  // stricter drift than required is fine
  CHECK(make_subsolution_params(1.0, 1.0, 2, 1, -100.0).A == -100.0);

  // drift above the threshold: the barrier argument breaks down
  CHECK_THROWS_AS(make_subsolution_params(1.0, 1.0, 2, 1, -34.999), std::invalid_argument);
  CHECK_THROWS_AS(make_subsolution_params(1.0, 1.0, 2, 1, 0.0), std::invalid_argument);
  // dimension and slice index ranges
  CHECK_THROWS_AS(make_subsolution_params(1.0, 1.0, 1, 1, -35.0), std::invalid_argument);
  CHECK_THROWS_AS(make_subsolution_params(1.0, 1.0, 2, 0, -35.0), std::invalid_argument);
  CHECK_THROWS_AS(make_subsolution_params(1.0, 1.0, 2, 2, -35.0), std::invalid_argument);
  // Lipschitz constants must be nonnegative
  CHECK_THROWS_AS(make_subsolution_params(-0.1, 1.0, 2, 1, -35.0), std::invalid_argument);
  CHECK_THROWS_AS(make_subsolution_params(1.0, -1.0, 2, 1, -35.0), std::invalid_argument);
}

TEST_CASE("drift residual is exactly A at the origin and nonpositive everywhere") {
  SubsolutionParams sp = make_subsolution_params(1.0, 1.0, 2, 1, -35.0);
  CHECK(barrier_residual(0.0, 0.0, 0.0, sp) == -35.0);
  CHECK(barrier_residual(0.0, 0.0, 0.7, sp) == doctest::Approx(-35.0 * std::exp(-35.0 * 0.7)));

  SubsolutionParams deep = make_subsolution_params(1.0, 1.0, 2, 1, -50.0);
  CHECK(barrier_residual(0.0, 0.0, 0.0, deep) == -50.0);

  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  double worst = -1e300;
  for (int s = 0; s < 500; ++s) {
    double v = barrier_residual(coord(rng), coord(rng), time(rng), sp);
    worst = std::max(worst, v);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("exact-Hessian residual is dominated by the bounded one") {
  SubsolutionParams sp = make_subsolution_params(1.0, 1.0, 2, 1, -35.0);
  std::mt19937_64 rng(654);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  for (int s = 0; s < 200; ++s) {
    double x1 = coord(rng), x2 = coord(rng), t = time(rng);
    double bounded = barrier_residual(x1, x2, t, sp);
    double exact = barrier_residual_exact_hessian(x1, x2, t, sp);
    CHECK(exact <= bounded + 1e-12);
  }
  // strictly smaller away from the origin: at (1, 0) the true row sums are
  // 0.5 e while the bound charges 3.5 e
  CHECK(barrier_residual_exact_hessian(1.0, 0.0, 0.0, sp) <
        barrier_residual(1.0, 0.0, 0.0, sp) - 0.1);
}

TEST_CASE("a zero drift term leaves a positive residual: the constant is necessary") {
  // bypass the factory: these parameters are exactly what it must reject
  SubsolutionParams zero{1.0, 1.0, 2, 1, 0.0};
  CHECK(barrier_residual(1.0, 0.0, 0.0, zero) > 1.0);
}

TEST_CASE("ordered pairs stay ordered under the row-measure flow") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  auto [u0, v0] = make_ordered_pair(g, BoundaryMode::clamp_minus_one, 7);
  // pure advective part: upwinding plus measure monotonicity make the update
  // monotone under the CFL bound, so ordering is preserved step by step
  ComparisonReport rep = check_comparison(u0, v0, row_params(1.0, 0.0), 0.05, 0.5);
  CHECK(rep.steps >= 2);
  CHECK(rep.sup_violation == 0.0);
  CHECK(rep.first_violation_time == -1.0);
}

TEST_CASE("comparison harness validates its inputs") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  auto [u0, v0] = make_ordered_pair(g, BoundaryMode::clamp_minus_one, 8);
  VelocityParams p = row_params(1.0, 0.0);
  // swapped arguments violate u0 <= v0 at every node
  CHECK_THROWS_AS(check_comparison(v0, u0, p, 0.05, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(check_comparison(u0, v0, p, 0.0, 0.5), std::invalid_argument);

  ScalarField other_mode = v0;
  other_mode.mode = BoundaryMode::mirror;
  CHECK_THROWS_AS(check_comparison(u0, other_mode, p, 0.05, 0.5), std::invalid_argument);
}

TEST_CASE("doubling the profile is an exact symmetry of the discrete flow") {
  // psi(s) = 2 s: every floating-point operation in the update commutes with
  // scaling by a power of two, so the relabeled run tracks bitwise and the
  // zero contours coincide exactly
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  ScalarField u0 = rasterize(Shape::disk(0.05, -0.02, 0.5), g, true);
  RelabelReport rep = check_relabel(
      u0, [](double s) { return 2.0 * s; }, row_params(1.0, 0.5), 0.04, {0.02, 0.04}, 0.5);
  REQUIRE(rep.times.size() == 2);
  CHECK(rep.times[0] == 0.02);
  CHECK(rep.times[1] == 0.04);
  REQUIRE(rep.hausdorff.size() == 2);
  CHECK(rep.hausdorff[0] == 0.0);
  CHECK(rep.hausdorff[1] == 0.0);
}

TEST_CASE("a saturating relabeling moves the zero contour by less than a cell") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  ScalarField u0 = rasterize(Shape::disk(0.05, -0.02, 0.5), g, true);
  RelabelReport rep = check_relabel(
      u0, [](double s) { return std::tanh(2.0 * s); }, row_params(1.0, 0.5), 0.04, {0.02, 0.04},
      0.5);
  REQUIRE(rep.hausdorff.size() == 2);
  CHECK(rep.hausdorff[0] <= 2.0 * g.h);
  CHECK(rep.hausdorff[1] <= 2.0 * g.h);
}

TEST_CASE("relabel harness rejects maps that break the contour semantics") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.1, 21, 21);
  ScalarField u0 = rasterize(Shape::disk(0.0, 0.0, 0.5), g, true);
  VelocityParams p = row_params(1.0, 0.0);
  std::vector<double> times{0.02};
  // zero level must be fixed
  CHECK_THROWS_AS(check_relabel(u0, [](double s) { return s + 0.1; }, p, 0.04, times, 0.5),
                  std::invalid_argument);
  // orientation must be preserved
  CHECK_THROWS_AS(check_relabel(u0, [](double s) { return -s; }, p, 0.04, times, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_relabel(u0, [](double) { return 0.0; }, p, 0.04, times, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_relabel(u0, [](double s) { return s; }, p, 0.0, times, 0.5),
                  std::invalid_argument);
}

TEST_CASE("general relabelings commute with a step to rounding accuracy") {
  // scaling by 10 rounds, and the row measure is discontinuous in the values:
  // a strict inequality collapsed to a tie by that rounding shifts the measure
  // by a whole cell. A generic profile keeps every pairwise value gap far above
  // rounding distance, so all superlevel comparisons survive the scaling and
  // the update commutes up to per-operation rounding. (Symmetric profiles such
  // as a rasterized disk carry ulp-level value ties and genuinely do not.)
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  ScalarField u = make_smooth_field(g, BoundaryMode::mirror, 5);
  ScalarField v = u; // clamp ghosts would pin -1 and not rescale; mirror does
  for (double& s : v.values) s *= 10.0;

  VelocityParams p = row_params(1.0, 0.6);
  double dt = stable_dt(u, p, 0.5, 0.1);
  double worst = 0.0;
  for (int n = 0; n < 3; ++n) {
    u = step(u, p, dt).first;
    v = step(v, p, dt).first;
  }
  for (size_t k = 0; k < u.values.size(); ++k) {
    double want = 10.0 * u.values[k];
    worst = std::max(worst, std::abs(v.values[k] - want) / std::max(1.0, std::abs(want)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("near-flat nodes collapse the admissible-speed envelope") {
  VelocityParams p = make_velocity_params(Model::tomographic, make_constant_amplitude(1.5),
                                          make_constant_weight(1.0), 1.0, 0.0);
  EnvelopeReport rep = audit_envelope(p, 400, 11);
  REQUIRE(rep.rungs.size() == 4);
  CHECK(rep.rungs[0].eps_p == 1e-1);
  CHECK(rep.rungs[3].eps_p == 1e-6);
  CHECK(rep.rungs[0].delta == 1e-2);
  CHECK(rep.rungs[3].delta == 1e-8);

  // spread envelope: amplitude * (measure range) * (max upwind magnitude)
  CHECK(rep.rungs[0].max_spread > 0.0);
  CHECK(rep.rungs[0].max_spread <= 1.5 * 4.0 * std::sqrt(2.0) * 1e-1);
  // the envelope shrinks with the gradient scale and dies at the bottom rung
  for (int r = 1; r < 4; ++r) CHECK(rep.rungs[r].max_spread < rep.rungs[r - 1].max_spread);
  CHECK(rep.rungs[3].max_spread <= 1e-4 * rep.rungs[0].max_spread);

  // exactly flat: any admissible set gives speed zero, curvature term vanishes
  CHECK(rep.zero_p_spread == 0.0);
  CHECK(rep.zero_p_curvature == 0.0);

  CHECK_THROWS_AS(audit_envelope(p, 0, 1), std::invalid_argument);

  VelocityParams vol = make_velocity_params(Model::volume_power, make_constant_amplitude(1.0),
                                            make_constant_weight(1.0), 0.5, 0.0);
  EnvelopeReport vrep = audit_envelope(vol, 100, 12);
  CHECK(vrep.rungs[0].max_spread > 0.0);
  CHECK(vrep.zero_p_spread == 0.0);
}
