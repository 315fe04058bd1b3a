#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nls {

// Ghost-cell policy outside the stored index range.
enum class BoundaryMode {
  clamp_minus_one, // reads return exactly -1 (far-field value of compact-front fields)
  mirror           // even reflection about the boundary nodes
};

// Uniform axis-aligned grid, square spacing h in both directions.
struct GridSpec {
  std::array<double, 2> origin{-2.0, -2.0};
  double h = 0.0;
  int nx = 0;
  int ny = 0;

  double x1(int i) const { return origin[0] + i * h; }
  double x2(int j) const { return origin[1] + j * h; }
  std::array<double, 2> coord(int i, int j) const { return {x1(i), x2(j)}; }
  long long node_count() const { return 1LL * nx * ny; }
  double domain_area() const { return (nx * h) * (ny * h); }

  bool operator==(const GridSpec&) const = default;
};

// Throws std::invalid_argument unless h > 0 and nx, ny >= 3.
GridSpec make_grid(std::array<double, 2> origin, double h, int nx, int ny);

// Node-centered scalar samples, row-major with i (the x1 index) fastest.
struct ScalarField {
  GridSpec grid;
  BoundaryMode mode = BoundaryMode::clamp_minus_one;
  std::vector<double> values;

  double& at(int i, int j) { return values[static_cast<size_t>(j) * grid.nx + i]; }
  double at(int i, int j) const { return values[static_cast<size_t>(j) * grid.nx + i]; }

  // Read with ghost policy applied for indices outside [0,nx) x [0,ny).
  double ghost(int i, int j) const;

  // Bilinear interpolation; throws std::domain_error outside the grid hull.
  double sample_bilinear(double x, double y) const;
};

// Constant-valued field; validates the value is finite.
ScalarField make_field(const GridSpec& grid, double fill, BoundaryMode mode);

// Wraps existing samples; validates size and finiteness.
ScalarField make_field(const GridSpec& grid, std::vector<double> values, BoundaryMode mode);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double oscillation(const ScalarField& f); // max - min

// Throws std::runtime_error naming the first non-finite node, if any.
void require_finite(const ScalarField& f, const char* context);

// Two-line header ("# grid ..." / "# t=..."), then ny rows of nx comma-separated
// values with 17 significant digits, j increasing.
void write_snapshot_csv(const ScalarField& f, double t, std::ostream& os);
void write_snapshot_csv(const ScalarField& f, double t, const std::string& path);

// printf %.17g, shared by every writer so outputs stay byte-reproducible.
std::string fmt17(double v);

} // namespace nls
