#include "nls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nls {

GridSpec make_grid(std::array<double, 2> origin, double h, int nx, int ny) {
  if (!std::isfinite(origin[0]) || !std::isfinite(origin[1]))
    throw std::invalid_argument("grid origin must be finite");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("grid spacing h must be positive and finite");
  if (nx < 3 || ny < 3)
    throw std::invalid_argument("grid needs nx >= 3 and ny >= 3 nodes");
  GridSpec g;
  g.origin = origin;
  g.h = h;
  g.nx = nx;
  g.ny = ny;
  return g;
}

static int mirror_index(int i, int n) {
  // Even reflection about the first/last node, folded until in range.
  int period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  if (i >= n) i = period - i;
  return i;
}

double ScalarField::ghost(int i, int j) const {
  if (i >= 0 && i < grid.nx && j >= 0 && j < grid.ny) return at(i, j);
  if (mode == BoundaryMode::clamp_minus_one) return -1.0;
  return at(mirror_index(i, grid.nx), mirror_index(j, grid.ny));
}

double ScalarField::sample_bilinear(double x, double y) const {
  double fx = (x - grid.origin[0]) / grid.h;
  double fy = (y - grid.origin[1]) / grid.h;
  if (fx < -1e-12 || fy < -1e-12 || fx > grid.nx - 1 + 1e-12 || fy > grid.ny - 1 + 1e-12)
    throw std::domain_error("sample_bilinear: point outside grid hull");
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.ny - 2);
  double s = fx - i;
  double t = fy - j;
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) +
         (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
}

ScalarField make_field(const GridSpec& grid, double fill, BoundaryMode mode) {
  if (!std::isfinite(fill)) throw std::invalid_argument("field fill value must be finite");
  ScalarField f;
  f.grid = grid;
  f.mode = mode;
  f.values.assign(static_cast<size_t>(grid.node_count()), fill);
  return f;
}

ScalarField make_field(const GridSpec& grid, std::vector<double> values, BoundaryMode mode) {
  if (values.size() != static_cast<size_t>(grid.node_count()))
    throw std::invalid_argument("field value count does not match grid dims");
  ScalarField f;
  f.grid = grid;
  f.mode = mode;
  f.values = std::move(values);
  require_finite(f, "make_field");
  return f;
}

double min_value(const ScalarField& f) {
  return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.values.begin(), f.values.end());
}

double oscillation(const ScalarField& f) { return max_value(f) - min_value(f); }

void require_finite(const ScalarField& f, const char* context) {
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i)
      if (!std::isfinite(f.at(i, j))) {
        std::ostringstream msg;
        msg << context << ": non-finite value at node (" << i << "," << j << ")";
        throw std::runtime_error(msg.str());
      }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot_csv(const ScalarField& f, double t, std::ostream& os) {
  os << "# grid origin=" << fmt17(f.grid.origin[0]) << "," << fmt17(f.grid.origin[1])
     << " h=" << fmt17(f.grid.h) << " dims=" << f.grid.nx << "x" << f.grid.ny << "\n";
  os << "# t=" << fmt17(t) << "\n";
  for (int j = 0; j < f.grid.ny; ++j) {
    for (int i = 0; i < f.grid.nx; ++i) {
      if (i) os << ",";
      os << fmt17(f.at(i, j));
    }
    os << "\n";
  }
}

void write_snapshot_csv(const ScalarField& f, double t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open snapshot file: " + path);
  write_snapshot_csv(f, t, os);
}

} // namespace nls
