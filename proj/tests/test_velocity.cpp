#include "nls/velocity.hpp"

#include "nls/front_init.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace nls;

namespace {

ScalarField sampled(const GridSpec& g, double (*fn)(double, double), BoundaryMode mode) {
  std::vector<double> v(g.node_count());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v[static_cast<size_t>(j) * g.nx + i] = fn(g.x1(i), g.x2(j));
  return make_field(g, std::move(v), mode);
}

VelocityParams plain_params(Model m, double c, double kappa) {
  return make_velocity_params(m, make_constant_amplitude(c), make_constant_weight(1.0), kappa,
                              0.0);
}

} // namespace

TEST_CASE("upwind gradient of |x1| at the kink is sqrt(2) for expansion") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.25, 9, 9);
  ScalarField f = sampled(
      g, [](double x, double) { return std::abs(x); }, BoundaryMode::mirror);
  StencilSample s = stencil(f, 4, 4); // x = 0
  CHECK(s.d1m == -1.0);
  CHECK(s.d1p == 1.0);
  CHECK(upwind_grad1(s, 1.0) == std::sqrt(2.0));

  StencilSample ramp = stencil(f, 6, 4); // x = 0.5, smooth slope
  CHECK(upwind_grad1(ramp, 1.0) == 1.0);
  CHECK_THROWS_AS(upwind_grad1(ramp, -0.5), std::invalid_argument);
}

TEST_CASE("two-axis upwind gradient covers both directions") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.25, 9, 9);
  ScalarField f = sampled(
      g, [](double x, double y) { return std::abs(x) + std::abs(y); }, BoundaryMode::mirror);
  StencilSample s = stencil(f, 4, 4);
  CHECK(upwind_grad2(s, 1.0) == 2.0); // sqrt(1 + 1 + 1 + 1)
  ScalarField plane = sampled(
      g, [](double x, double y) { return 0.5 * x - 0.25 * y; }, BoundaryMode::mirror);
  StencilSample p = stencil(plane, 4, 4);
  CHECK(upwind_grad2(p, 1.0) == doctest::Approx(std::sqrt(0.25 + 0.0625)).epsilon(1e-14));
  CHECK_THROWS_AS(upwind_grad2(p, -1.0), std::invalid_argument);
}

TEST_CASE("curvature term at a critical point is the half-Laplacian") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.25, 9, 9);
  ScalarField bowl = sampled(
      g, [](double x, double y) { return x * x + y * y; }, BoundaryMode::mirror);
  StencilSample s = stencil(bowl, 4, 4); // origin: p = 0, u11 = u22 = 2
  CHECK(s.p1 == 0.0);
  CHECK(s.p2 == 0.0);
  CHECK(curvature_term(s, 1e-6) == doctest::Approx(2.0).epsilon(1e-12));

  ScalarField trough = sampled(
      g, [](double x, double) { return x * x; }, BoundaryMode::mirror);
  StencilSample t = stencil(trough, 4, 4);
  CHECK(curvature_term(t, 1e-6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(curvature_term(t, 0.0), std::invalid_argument);
}

TEST_CASE("curvature term approximates |Du| div(Du/|Du|) on a cone") {
  // u = -|x - c|: level sets are circles around c, curvature of the r-level is 1/r,
  // and the term evaluates |Du| * curvature with |Du| = 1.
  GridSpec g = make_grid({-1.0, -1.0}, 0.01, 201, 201);
  ScalarField cone = sampled(
      g, [](double x, double y) { return -std::hypot(x - 0.203, y - 0.151); },
      BoundaryMode::mirror);
  auto check_node = [&](int i, int j) {
    double r = std::hypot(g.x1(i) - 0.203, g.x2(j) - 0.151);
    double got = curvature_term(stencil(cone, i, j), 1e-9);
    CHECK(got == doctest::Approx(-1.0 / r).epsilon(5e-3)); // exact value is -1/r
  };
  check_node(170, 115); // roughly half a unit to the right of the center
  check_node(120, 90);  // a quarter unit below
  check_node(140, 140);
}

TEST_CASE("effective delta follows the oscillation unless overridden") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.5, 5, 5);
  ScalarField f = sampled(
      g, [](double x, double y) { return 0.25 * x + 0.5 * y; }, BoundaryMode::mirror);
  VelocityParams p = plain_params(Model::tomographic, 1.0, 1.0);
  CHECK(effective_delta(p, f) == doctest::Approx(1e-6 * oscillation(f)).epsilon(1e-12));
  p.grad_delta = 0.125;
  CHECK(effective_delta(p, f) == 0.125);
  ScalarField flat = make_field(g, 0.3, BoundaryMode::mirror);
  p.grad_delta = 0.0;
  CHECK(effective_delta(p, flat) == 1e-6);
}

TEST_CASE("amplitude validation") {
  CHECK_THROWS_AS(make_constant_amplitude(-0.5), std::invalid_argument);
  CHECK_NOTHROW(make_constant_amplitude(0.0)); // curvature-only degenerate case
  GridSpec g = make_grid({0.0, 0.0}, 1.0, 3, 3);
  std::vector<double> bad(9, 1.0);
  bad[4] = -1e-9;
  CHECK_THROWS_AS(make_field_amplitude(make_field(g, bad, BoundaryMode::mirror), 1.0),
                  std::invalid_argument);
  std::vector<double> ok(9, 2.0);
  Amplitude a = make_field_amplitude(make_field(g, ok, BoundaryMode::mirror), 0.0);
  CHECK(a.max_value() == 2.0);
  CHECK(a.at(1, 1) == 2.0);
  CHECK_THROWS_AS(make_velocity_params(Model::tomographic, a, make_constant_weight(1.0), -1.0,
                                       0.0),
                  std::invalid_argument);
}

TEST_CASE("row-measure rhs against a hand computation") {
  // h = 0.5, row values 0.8, 0.3, 0.4, -0.2, 0.1; node (2, row): threshold 0.4,
  // weak superlevel = {0, 2}, measure = 2 * 0.5 = 1 with g = 1.
  GridSpec g = make_grid({0.0, 0.0}, 0.5, 5, 3);
  std::vector<double> v(15, -1.0);
  double row[5] = {0.8, 0.3, 0.4, -0.2, 0.1};
  for (int i = 0; i < 5; ++i) v[5 + i] = row[i];
  ScalarField f = make_field(g, v, BoundaryMode::clamp_minus_one);
  VelocityParams p = plain_params(Model::tomographic, 2.0, 0.0);

  StencilSample s = stencil(f, 2, 1);
  double grad = upwind_grad1(s, 2.0);
  double want = 2.0 * 1.0 * grad; // C * measure * |d1 u|
  CHECK(tomo_rhs_at(f, 2, 1, p) == doctest::Approx(want).epsilon(1e-14));

  RowMeasureIndex idx = build_row_index(f, p.weight);
  CHECK(tomo_rhs_at(f, idx, 2, 1, p, effective_delta(p, f)) ==
        doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("volume rhs uses the square root of the superlevel area") {
  GridSpec g = make_grid({0.0, 0.0}, 0.5, 5, 5);
  // values above 0 at exactly 6 nodes
  std::vector<double> v(25, -0.5);
  int ups[6] = {6, 7, 8, 12, 16, 17};
  for (int k : ups) v[k] = 0.5;
  v[12] = 0.25; // threshold node
  ScalarField f = make_field(g, v, BoundaryMode::clamp_minus_one);
  VelocityParams p = plain_params(Model::volume_power, 1.5, 0.0);

  // superlevel of u(2,2) = 0.25: the five 0.5 nodes plus itself -> area 6 h^2
  StencilSample s = stencil(f, 2, 2);
  double want = 1.5 * std::sqrt(6.0 * 0.25) * upwind_grad2(s, 1.5);
  CHECK(volume_rhs_at(f, 2, 2, p) == doctest::Approx(want).epsilon(1e-14));

  std::vector<double> sorted(f.values);
  std::sort(sorted.begin(), sorted.end());
  CHECK(volume_rhs_at(f, sorted, 2, 2, p, effective_delta(p, f)) ==
        doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("fast and naive rhs agree on random fields for all models") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> val(-0.9, 0.9);
  GridSpec g = make_grid({-1.0, -1.0}, 0.125, 17, 17);
  WeightTable w = make_table_weight({-1.5, 0.0, 1.5}, {0.3, 1.2, 0.6});
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> v(g.node_count());
    for (auto& x : v) x = val(rng);
    v[40] = v[41]; // exact tie on some row
    ScalarField f = make_field(g, v, BoundaryMode::clamp_minus_one);

    VelocityParams tom = make_velocity_params(Model::tomographic, make_constant_amplitude(1.3), w,
                                              0.7, 0.0);
    VelocityParams gen = make_velocity_params(Model::general_k1, make_constant_amplitude(0.8), w,
                                              0.0, 0.0);
    VelocityParams vol = plain_params(Model::volume_power, 1.1, 0.4);

    double delta = effective_delta(tom, f);
    RowMeasureIndex idx = build_row_index(f, w);
    std::vector<double> sorted(f.values);
    std::sort(sorted.begin(), sorted.end());

    for (int probe = 0; probe < 30; ++probe) {
      int i = std::uniform_int_distribution<int>(0, g.nx - 1)(rng);
      int j = std::uniform_int_distribution<int>(0, g.ny - 1)(rng);
      double ft = tomo_rhs_at(f, idx, i, j, tom, delta);
      double nt = tomo_rhs_at(f, i, j, tom);
      CHECK(std::abs(ft - nt) <= 1e-12 * std::max(1.0, std::abs(nt)));
      double fv = volume_rhs_at(f, sorted, i, j, vol, effective_delta(vol, f));
      double nv = volume_rhs_at(f, i, j, vol);
      CHECK(std::abs(fv - nv) <= 1e-12 * std::max(1.0, std::abs(nv)));
      // general model: row measure paired with the two-axis gradient
      double fg = general_rhs_at(f, idx, i, j, gen, effective_delta(gen, f));
      StencilSample s = stencil(f, i, j);
      double ng = 0.8 * weighted_measure(row_superlevel(f, i, j, false), w, g) *
                  upwind_grad2(s, 0.8);
      CHECK(std::abs(fg - ng) <= 1e-12 * std::max(1.0, std::abs(ng)));
    }
  }
}

TEST_CASE("enlarging the nonlocal set never lowers the advective speed") {
  GridSpec g = make_grid({-2.0, -2.0}, 0.04, 101, 101);
  ScalarField f = perturb(rasterize(Shape::disk(0.02, -0.03, 0.8), g, true), 3, 0.04, 4);
  for (Model m : {Model::tomographic, Model::volume_power, Model::general_k1}) {
    VelocityParams p = plain_params(m, 1.0, 0.0);
    SetMonotonicityReport rep = check_set_monotonicity(p, f, 400, 99);
    CHECK(rep.samples == 400);
    CHECK(rep.violations == 0);
  }
}

TEST_CASE("clamp ghosts freeze expansion at the hull") {
  // a plateau reaching the boundary: the ghost reads -1, so the one-sided
  // difference outward is negative and the upwind gradient vanishes
  GridSpec g = make_grid({0.0, 0.0}, 0.5, 5, 3);
  ScalarField f = make_field(g, 0.5, BoundaryMode::clamp_minus_one);
  StencilSample s = stencil(f, 4, 1); // right edge
  CHECK(s.d1p == (-1.0 - 0.5) / 0.5);
  CHECK(upwind_grad1(s, 1.0) == 0.0);
  VelocityParams p = plain_params(Model::tomographic, 1.0, 0.0);
  CHECK(tomo_rhs_at(f, 4, 1, p) == 0.0);
}
