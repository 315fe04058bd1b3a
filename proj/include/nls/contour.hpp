#pragma once

#include "nls/grid.hpp"

#include <array>
#include <vector>

namespace nls {

struct Polyline {
  std::vector<std::array<double, 2>> pts; // ordered, consecutive points distinct
  bool closed = false;
};

// Marching squares with linear interpolation along cell edges. Node values equal
// to `level` are nudged by +1e-12*oscillation(f) so tie handling is deterministic.
// Saddle cells are split by the cell-average rule. A constant field yields no
// polylines.
std::vector<Polyline> extract_contour(const ScalarField& f, double level);

// Symmetric Hausdorff distance between the two polyline families, evaluated on
// vertices plus segment midpoints. Throws std::invalid_argument if either side
// is empty.
double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b);

// Bounding box helpers for contour-based measurements.
struct Extent {
  double x1_lo, x1_hi, x2_lo, x2_hi;
};
Extent contour_extent(const std::vector<Polyline>& polys);

// Closed polyline sampling a circle; convenience for analytic reference fronts.
Polyline circle_polyline(double cx, double cy, double r, int npts);

void write_contour_csv(const std::vector<Polyline>& polys, std::ostream& os);

} // namespace nls
