#include "nls/front_init.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nls {

static const double kPi = 3.14159265358979323846;

Shape Shape::disk(double cx, double cy, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("disk radius must be positive");
  Shape s;
  s.kind = ShapeKind::disk;
  s.cx = cx;
  s.cy = cy;
  s.radius = r;
  return s;
}

Shape Shape::rectangle(double cx, double cy, double hw1, double hw2) {
  if (!(hw1 > 0.0) || !(hw2 > 0.0))
    throw std::invalid_argument("rectangle half-widths must be positive");
  Shape s;
  s.kind = ShapeKind::rectangle;
  s.cx = cx;
  s.cy = cy;
  s.hw1 = hw1;
  s.hw2 = hw2;
  return s;
}

Shape Shape::annulus(double cx, double cy, double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in))
    throw std::invalid_argument("annulus needs 0 < r_in < r_out");
  Shape s;
  s.kind = ShapeKind::annulus;
  s.cx = cx;
  s.cy = cy;
  s.r_in = r_in;
  s.r_out = r_out;
  return s;
}

double signed_distance(const Shape& s, double x, double y) {
  double dx = x - s.cx;
  double dy = y - s.cy;
  switch (s.kind) {
    case ShapeKind::disk:
      return s.radius - std::hypot(dx, dy);
    case ShapeKind::rectangle: {
      double qx = std::abs(dx) - s.hw1;
      double qy = std::abs(dy) - s.hw2;
      if (qx <= 0.0 && qy <= 0.0) return -std::max(qx, qy); // interior: distance to nearest side
      return -std::hypot(std::max(qx, 0.0), std::max(qy, 0.0)); // exterior, corner-aware
    }
    case ShapeKind::annulus: {
      double r = std::hypot(dx, dy);
      return std::min(r - s.r_in, s.r_out - r);
    }
  }
  return 0.0;
}

ShapeBounds shape_bounds(const Shape& s) {
  double ext1 = 0, ext2 = 0;
  switch (s.kind) {
    case ShapeKind::disk: ext1 = ext2 = s.radius; break;
    case ShapeKind::rectangle: ext1 = s.hw1; ext2 = s.hw2; break;
    case ShapeKind::annulus: ext1 = ext2 = s.r_out; break;
  }
  return {s.cx - ext1, s.cx + ext1, s.cy - ext2, s.cy + ext2};
}

ScalarField to_class_c(const ScalarField& d) {
  ScalarField out = d;
  out.mode = BoundaryMode::clamp_minus_one;
  for (double& v : out.values) v = 2.0 * std::atan(v) / kPi;
  return out;
}

ScalarField rasterize(const Shape& s, const GridSpec& grid, bool class_c) {
  ShapeBounds b = shape_bounds(s);
  double m = 2.0 * grid.h;
  if (b.x1_lo < grid.x1(0) + m || b.x1_hi > grid.x1(grid.nx - 1) - m ||
      b.x2_lo < grid.x2(0) + m || b.x2_hi > grid.x2(grid.ny - 1) - m)
    throw std::invalid_argument("shape must keep a 2h margin inside the grid hull");

  ScalarField f = make_field(grid, 0.0, BoundaryMode::mirror);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      f.at(i, j) = signed_distance(s, grid.x1(i), grid.x2(j));
  if (class_c) return to_class_c(f);
  return f;
}

ScalarField perturb(const ScalarField& f, std::uint64_t seed, double amplitude, int modes) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("perturb amplitude must be >= 0");
  if (modes < 1) throw std::invalid_argument("perturb needs modes >= 1");
  if (amplitude == 0.0) return f;

  const GridSpec& g = f.grid;
  double len1 = (g.nx - 1) * g.h;
  double len2 = (g.ny - 1) * g.h;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

  struct ModeTerm {
    double a, k1, k2, p1, p2;
  };
  std::vector<ModeTerm> terms;
  terms.reserve(static_cast<size_t>(modes));
  for (int m = 1; m <= modes; ++m) {
    ModeTerm t;
    t.a = coef(rng);
    t.k1 = m * kPi / len1;
    t.k2 = m * kPi / len2;
    t.p1 = phase(rng);
    t.p2 = phase(rng);
    terms.push_back(t);
  }

  std::vector<double> bump(f.values.size(), 0.0);
  double sup = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x1(i) - g.origin[0];
      double y = g.x2(j) - g.origin[1];
      double v = 0.0;
      for (const ModeTerm& t : terms)
        v += t.a * std::sin(t.k1 * x + t.p1) * std::sin(t.k2 * y + t.p2);
      bump[static_cast<size_t>(j) * g.nx + i] = v;
      sup = std::max(sup, std::abs(v));
    }
  if (sup == 0.0) return f;

  double scale = amplitude / sup;
  ScalarField out = f;
  for (size_t k = 0; k < out.values.size(); ++k) out.values[k] += scale * bump[k];
  require_finite(out, "perturb");
  return out;
}

} // namespace nls
