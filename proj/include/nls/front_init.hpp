#pragma once

#include "nls/grid.hpp"

#include <cstdint>

namespace nls {

enum class ShapeKind { disk, rectangle, annulus };

// Compact reference shapes for fronts. Only the fields of the active kind are used.
struct Shape {
  ShapeKind kind = ShapeKind::disk;
  double cx = 0.0, cy = 0.0;
  double radius = 0.0;            // disk
  double hw1 = 0.0, hw2 = 0.0;    // rectangle half-widths along x1, x2
  double r_in = 0.0, r_out = 0.0; // annulus

  static Shape disk(double cx, double cy, double r);
  static Shape rectangle(double cx, double cy, double hw1, double hw2);
  static Shape annulus(double cx, double cy, double r_in, double r_out);
};

// Exact signed distance to the shape boundary, positive inside.
double signed_distance(const Shape& s, double x, double y);

// Interval [lo, hi] per axis that contains the shape.
struct ShapeBounds {
  double x1_lo, x1_hi, x2_lo, x2_hi;
};
ShapeBounds shape_bounds(const Shape& s);

// Pointwise s -> 2*atan(s)/pi, mapping signed distance into (-1, 1); the result
// carries the clamp ghost policy since its far field is -1.
ScalarField to_class_c(const ScalarField& distance_field);

// Signed-distance samples of the shape (mirror ghosts), or the class-C transform
// of them (clamp ghosts) when class_c is set. Throws std::invalid_argument unless
// the shape keeps a >= 2h margin to the grid hull.
ScalarField rasterize(const Shape& s, const GridSpec& grid, bool class_c);

// Adds a seeded low-frequency trigonometric field whose sup norm over the nodes
// equals `amplitude` exactly (up to one scaling rounding). amplitude = 0 returns
// an identical copy. Same seed, same grid: bit-identical output.
ScalarField perturb(const ScalarField& f, std::uint64_t seed, double amplitude, int modes);

} // namespace nls
