#pragma once

#include "nls/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace nls {

// Cells of one horizontal row whose value relates to a threshold: weak keeps
// u(i',j) >= theta (the forward-simulation convention), strict keeps >.
// Comparisons are exact floating-point; no epsilon.
struct LevelLineSet {
  int row = 0;
  double threshold = 0.0;
  bool strict = false;
  std::vector<int> cells; // ascending i
};

LevelLineSet row_superlevel(const ScalarField& f, int i, int j, bool strict);

// Line weight g(z) along x1. Either a positive constant or a sampled table with
// strictly increasing z and positive g, linearly interpolated, zero outside the
// sampled range.
struct WeightTable {
  bool is_constant = true;
  double constant = 1.0;
  std::vector<double> z;
  std::vector<double> g;

  double value(double zq) const;
  double trapezoid_mass() const;

  bool operator==(const WeightTable&) const = default;
};

WeightTable make_constant_weight(double g);
WeightTable make_table_weight(std::vector<double> z, std::vector<double> g);

// Sum of g(x1(cell))*h over the set's cells.
double weighted_measure(const LevelLineSet& set, const WeightTable& w, const GridSpec& grid);

// Per-row descending sort plus prefix sums of the cell weights g(x1(i))*h.
// query(...) answers threshold measures in O(log nx); equals the naive row scan
// up to summation-order rounding.
struct RowMeasureIndex {
  int nx = 0;
  std::vector<std::vector<double>> sorted_vals; // per row, descending
  std::vector<std::vector<double>> prefix;      // per row, prefix[k] = weight of top-k cells

  double query(int row, double threshold, bool strict) const;
};

RowMeasureIndex build_row_index(const ScalarField& f, const WeightTable& w);

// Distance between 1-D cell-index sets A, B on a grid of cell width h centered
// at 0 (cell i covers [i*h, (i+1)*h)): sum over n = 1..n_max of
// measure((A xor B) inside (-n, n)) / (2^n * 2n). Truncation error <= 2^-n_max.
double set_distance(const std::vector<int>& a, const std::vector<int>& b, double h, int n_max);

// Cells whose centers lie in [lo, hi].
std::vector<int> rasterize_interval(double lo, double hi, double h);

// Discrete check of the superlevel-set indicator stability under u_n -> u:
// limsup of the sequence indicators must not exceed the limit indicator except
// at exact value ties, which are reported separately (they are exactly the
// cases the strict-inequality convention exists for).
struct LimsupEntry {
  int z = 0;
  bool tail_admits_one = false;
  bool weak_limit = false;   // limit indicator with >=
  bool strict_limit = false; // limit indicator with >
  enum Kind { ok, violation, tie } kind = ok;
};

struct LimsupReport {
  double convergence_error = 0.0;
  int violations = 0;
  int ties = 0;
  std::vector<LimsupEntry> entries;
};

// seq[n] is evaluated at points[n] (same grid as limit). Throws if fewer than 3
// fields are supplied or the sequence values at the marked points fail to
// approach the limit value within 1e-6 over the tail.
LimsupReport limsup_inclusion_check(const std::vector<ScalarField>& seq,
                                    const std::vector<std::array<int, 2>>& points,
                                    const ScalarField& limit, std::array<int, 2> limit_point,
                                    const std::vector<int>& z_samples);

} // namespace nls
