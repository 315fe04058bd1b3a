#include <doctest.h>

#include "nls/tomo.hpp"
#include "nls/velocity.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace nls;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream os(p);
  os << body;
  os.close();
  return p.string();
}

// expects `fn` to throw E whose message contains `needle`
template <typename E, typename Fn>
void check_throws_containing(Fn&& fn, const std::string& needle) {
  bool threw = false;
  try {
    fn();
  } catch (const E& e) {
    threw = true;
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                  "message was: " << e.what() << " (wanted: " << needle << ")");
  }
  CHECK_MESSAGE(threw, "expected an exception containing: " << needle);
}

} // namespace

TEST_CASE("phantoms are smooth-boundary shapes only") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  CHECK_THROWS_AS(make_phantom(Shape::rectangle(0.0, 0.0, 0.4, 0.3), g), std::invalid_argument);
  CHECK_NOTHROW(make_phantom(Shape::disk(0.0, 0.0, 0.5), g));
  CHECK_NOTHROW(make_phantom(Shape::annulus(0.0, 0.0, 0.2, 0.5), g));
}

TEST_CASE("phantom mask and level-set field agree on the interior") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.02, 101, 101);
  Shape s = Shape::disk(0.1, -0.05, 0.5);
  Phantom ph = make_phantom(s, g);

  REQUIRE(ph.inside.size() == static_cast<size_t>(g.node_count()));
  int count = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      bool mask = ph.inside[static_cast<size_t>(j) * g.nx + i] != 0;
      bool analytic = signed_distance(s, g.x1(i), g.x2(j)) > 0.0;
      CHECK(mask == analytic);
      // the field keeps the mask's sign (zero only on the circle itself,
      // which no lattice node of this layout hits)
      CHECK((ph.levelset.at(i, j) > 0.0) == mask);
      count += mask ? 1 : 0;
    }
  // interior fraction tracks the disk area pi r^2 within a boundary-cell band
  double frac = static_cast<double>(count) / g.node_count();
  double want = 3.14159265358979323846 * 0.25 / g.domain_area();
  CHECK(frac == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("analytic phantom boundary matches the extracted zero contour") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.02, 101, 101);

  Phantom disk = make_phantom(Shape::disk(0.1, -0.05, 0.5), g);
  std::vector<Polyline> db = phantom_boundary(disk, 256);
  REQUIRE(db.size() == 1);
  CHECK(db[0].closed);
  CHECK(db[0].pts.size() == 256);
  for (const auto& pt : db[0].pts) {
    double r = std::hypot(pt[0] - 0.1, pt[1] + 0.05);
    CHECK(r == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(hausdorff_distance(extract_contour(disk.levelset, 0.0), db) <= g.h);

  Phantom ring = make_phantom(Shape::annulus(0.0, 0.0, 0.3, 0.6), g);
  std::vector<Polyline> rb = phantom_boundary(ring, 256);
  REQUIRE(rb.size() == 2);
  CHECK(std::hypot(rb[0].pts[0][0], rb[0].pts[0][1]) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::hypot(rb[1].pts[0][0], rb[1].pts[0][1]) == doctest::Approx(0.6).epsilon(1e-12));
  // the ring front extracts as two loops close to the analytic circles
  CHECK(extract_contour(ring.levelset, 0.0).size() == 2);
  CHECK(hausdorff_distance(extract_contour(ring.levelset, 0.0), rb) <= g.h);
}

TEST_CASE("projection weight files load with headers, comments, and blank lines") {
  std::string path = write_temp("nls_weight_ok.csv",
                                "# beam profile\n"
                                "z,g\n"
                                "\n"
                                "-1.0, 0.2\n"
                                "-0.5, 1.0\n"
                                " 0.5, 1.0\n"
                                " 1.0, 0.2\n");
  WeightTable w = load_projection_weight(path);
  CHECK(!w.is_constant);
  REQUIRE(w.z.size() == 4);
  CHECK(w.z[0] == -1.0);
  CHECK(w.g[0] == 0.2);
  CHECK(w.z[3] == 1.0);
  // linear interpolation inside a segment
  CHECK(w.value(-0.75) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(w.value(0.0) == 1.0);
  // trapezoid rule by hand: 2 * (0.5 * (0.2 + 1.0) * 0.5) + 1.0
  CHECK(w.trapezoid_mass() == doctest::Approx(1.6).epsilon(1e-14));
}

TEST_CASE("projection weight errors name the offending row") {
  check_throws_containing<std::runtime_error>(
      [] { load_projection_weight("/nonexistent/weight.csv"); }, "cannot open");

  std::string empty = write_temp("nls_weight_empty.csv", "# nothing here\n\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(empty); }, "empty");

  std::string single = write_temp("nls_weight_single.csv", "z,g\n0.0,1.0\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(single); },
                                              "at least 2 rows");

  std::string neg = write_temp("nls_weight_neg.csv", "0.0,1.0\n0.5,-0.3\n1.0,1.0\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(neg); },
                                              "row 2: weight must be positive");

  std::string unsorted = write_temp("nls_weight_unsorted.csv", "0.0,1.0\n0.5,1.0\n0.25,1.0\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(unsorted); },
                                              "row 3: z must be strictly increasing");

  std::string garbled = write_temp("nls_weight_garbled.csv", "0.0,1.0\nabc,1.0\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(garbled); },
                                              "row 2: malformed number");

  std::string onecol = write_temp("nls_weight_onecol.csv", "0.0,1.0\n0.5\n");
  check_throws_containing<std::runtime_error>([&] { load_projection_weight(onecol); },
                                              "row 2: expected two comma-separated columns");
}

TEST_CASE("reconstruction records a distance per snapshot and is deterministic") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  Phantom ph = make_phantom(Shape::disk(0.0, 0.0, 0.5), g);
  VelocityParams p = make_velocity_params(Model::tomographic, make_constant_amplitude(1.0),
                                          make_constant_weight(1.0), 0.2, 0.0);
  EvolveOptions opt;
  opt.snapshot_stride = 5;

  ReconstructionResult a = reconstruct(ph, 9, 0.04, p, 0.02, opt);
  REQUIRE(!a.times.empty());
  CHECK(a.times.size() == a.distances.size());
  CHECK(a.times.size() == a.traj.snapshots.size());
  CHECK(a.times.front() == 0.0);
  CHECK(a.times.back() == a.traj.final_time);
  for (double d : a.distances) {
    CHECK(std::isfinite(d));
    CHECK(d >= 0.0);
  }
  // seeded noise of amplitude 0.04 cannot move the front very far at t = 0
  CHECK(a.distances.front() <= 0.2);

  ReconstructionResult b = reconstruct(ph, 9, 0.04, p, 0.02, opt);
  REQUIRE(b.distances.size() == a.distances.size());
  for (size_t k = 0; k < a.distances.size(); ++k) CHECK(a.distances[k] == b.distances[k]);
  const ScalarField& fa = a.traj.snapshots.back().second;
  const ScalarField& fb = b.traj.snapshots.back().second;
  for (size_t k = 0; k < fa.values.size(); ++k) CHECK(fa.values[k] == fb.values[k]);

  // zero noise starts on the phantom: the first recorded distance is sub-cell
  ReconstructionResult c = reconstruct(ph, 9, 0.0, p, 0.01, opt);
  CHECK(c.distances.front() <= g.h);
}

TEST_CASE("reconstruction reports a vanished front instead of comparing nothing") {
  GridSpec g = make_grid({-1.0, -1.0}, 0.05, 41, 41);
  Phantom ph = make_phantom(Shape::disk(0.0, 0.0, 0.3), g);
  // curvature-only flow collapses the disk at t = r^2/2 = 0.045, well before T
  VelocityParams p = make_velocity_params(Model::tomographic, make_constant_amplitude(0.0),
                                          make_constant_weight(1.0), 1.0, 0.0);
  EvolveOptions opt;
  opt.snapshot_stride = 10;
  check_throws_containing<std::runtime_error>([&] { reconstruct(ph, 1, 0.0, p, 0.1, opt); },
                                              "front vanished");
}
