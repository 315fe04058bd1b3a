#include "nls/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nls {

LevelLineSet row_superlevel(const ScalarField& f, int i, int j, bool strict) {
  if (i < 0 || i >= f.grid.nx || j < 0 || j >= f.grid.ny)
    throw std::invalid_argument("row_superlevel: node outside grid");
  LevelLineSet s;
  s.row = j;
  s.threshold = f.at(i, j);
  s.strict = strict;
  for (int k = 0; k < f.grid.nx; ++k) {
    double v = f.at(k, j);
    if (strict ? v > s.threshold : v >= s.threshold) s.cells.push_back(k);
  }
  return s;
}

double WeightTable::value(double zq) const {
  if (is_constant) return constant;
  if (zq < z.front() || zq > z.back()) return 0.0;
  auto it = std::upper_bound(z.begin(), z.end(), zq);
  if (it == z.begin()) return g.front();
  if (it == z.end()) return g.back();
  size_t hi = static_cast<size_t>(it - z.begin());
  size_t lo = hi - 1;
  double t = (zq - z[lo]) / (z[hi] - z[lo]);
  return g[lo] + t * (g[hi] - g[lo]);
}

double WeightTable::trapezoid_mass() const {
  if (is_constant) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (size_t k = 0; k + 1 < z.size(); ++k) m += 0.5 * (g[k] + g[k + 1]) * (z[k + 1] - z[k]);
  return m;
}

WeightTable make_constant_weight(double g) {
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::invalid_argument("constant weight must be positive and finite");
  WeightTable w;
  w.is_constant = true;
  w.constant = g;
  return w;
}

WeightTable make_table_weight(std::vector<double> z, std::vector<double> g) {
  if (z.size() != g.size()) throw std::invalid_argument("weight table: z/g size mismatch");
  if (z.size() < 2) throw std::invalid_argument("weight table needs at least 2 rows");
  for (size_t k = 0; k < z.size(); ++k) {
    if (!std::isfinite(z[k]) || !std::isfinite(g[k]))
      throw std::invalid_argument("weight table: non-finite entry at row " + std::to_string(k + 1));
    if (!(g[k] > 0.0))
      throw std::invalid_argument("weight table: nonpositive weight at row " + std::to_string(k + 1));
    if (k > 0 && !(z[k] > z[k - 1]))
      throw std::invalid_argument("weight table: z not strictly increasing at row " +
                                  std::to_string(k + 1));
  }
  WeightTable w;
  w.is_constant = false;
  w.constant = 0.0;
  w.z = std::move(z);
  w.g = std::move(g);
  return w;
}

double weighted_measure(const LevelLineSet& set, const WeightTable& w, const GridSpec& grid) {
  double m = 0.0;
  for (int c : set.cells) m += w.value(grid.x1(c)) * grid.h;
  return m;
}

double RowMeasureIndex::query(int row, double threshold, bool strict) const {
  const std::vector<double>& vals = sorted_vals[static_cast<size_t>(row)];
  // vals descending; count entries satisfying the comparison against threshold
  size_t count;
  if (strict)
    count = static_cast<size_t>(
        std::partition_point(vals.begin(), vals.end(),
                             [&](double v) { return v > threshold; }) -
        vals.begin());
  else
    count = static_cast<size_t>(
        std::partition_point(vals.begin(), vals.end(),
                             [&](double v) { return v >= threshold; }) -
        vals.begin());
  return prefix[static_cast<size_t>(row)][count];
}

RowMeasureIndex build_row_index(const ScalarField& f, const WeightTable& w) {
  const GridSpec& g = f.grid;
  RowMeasureIndex idx;
  idx.nx = g.nx;
  idx.sorted_vals.resize(static_cast<size_t>(g.ny));
  idx.prefix.resize(static_cast<size_t>(g.ny));

  std::vector<double> cell_weight(static_cast<size_t>(g.nx));
  for (int i = 0; i < g.nx; ++i) cell_weight[static_cast<size_t>(i)] = w.value(g.x1(i)) * g.h;

  std::vector<int> order(static_cast<size_t>(g.nx));
  for (int j = 0; j < g.ny; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double va = f.at(a, j), vb = f.at(b, j);
      if (va != vb) return va > vb;
      return a < b; // deterministic tie order
    });
    auto& vals = idx.sorted_vals[static_cast<size_t>(j)];
    auto& pre = idx.prefix[static_cast<size_t>(j)];
    vals.resize(static_cast<size_t>(g.nx));
    pre.resize(static_cast<size_t>(g.nx) + 1);
    pre[0] = 0.0;
    for (int k = 0; k < g.nx; ++k) {
      vals[static_cast<size_t>(k)] = f.at(order[static_cast<size_t>(k)], j);
      pre[static_cast<size_t>(k) + 1] =
          pre[static_cast<size_t>(k)] + cell_weight[static_cast<size_t>(order[static_cast<size_t>(k)])];
    }
  }
  return idx;
}

std::vector<int> rasterize_interval(double lo, double hi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("rasterize_interval: h must be positive");
  std::vector<int> cells;
  if (hi < lo) return cells;
  // cell i has center (i + 0.5) * h
  long long first = static_cast<long long>(std::ceil(lo / h - 0.5));
  long long last = static_cast<long long>(std::floor(hi / h - 0.5));
  for (long long i = first; i <= last; ++i) cells.push_back(static_cast<int>(i));
  return cells;
}

double set_distance(const std::vector<int>& a, const std::vector<int>& b, double h, int n_max) {
  if (!(h > 0.0)) throw std::invalid_argument("set_distance: h must be positive");
  if (n_max < 1) throw std::invalid_argument("set_distance: n_max must be >= 1");

  std::vector<int> sa = a, sb = b, sym;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::back_inserter(sym));

  // suffix[m] = sum_{n=m}^{n_max} 1/(2^n * 2n); a cell with |center| in
  // [m-1, m) first appears in the balls of radius >= m.
  std::vector<double> suffix(static_cast<size_t>(n_max) + 2, 0.0);
  for (int n = n_max; n >= 1; --n)
    suffix[static_cast<size_t>(n)] =
        suffix[static_cast<size_t>(n) + 1] + 1.0 / (std::ldexp(1.0, n) * 2.0 * n);

  double d = 0.0;
  for (int c : sym) {
    double center = (c + 0.5) * h;
    double ac = std::abs(center);
    if (ac >= static_cast<double>(n_max)) continue;
    int first_n = std::max(1, static_cast<int>(std::floor(ac)) + 1);
    d += h * suffix[static_cast<size_t>(first_n)];
  }
  return d;
}

LimsupReport limsup_inclusion_check(const std::vector<ScalarField>& seq,
                                    const std::vector<std::array<int, 2>>& points,
                                    const ScalarField& limit, std::array<int, 2> limit_point,
                                    const std::vector<int>& z_samples) {
  if (seq.size() < 3) throw std::invalid_argument("limsup check needs at least 3 fields");
  if (seq.size() != points.size())
    throw std::invalid_argument("limsup check: one evaluation point per field required");

  const size_t n = seq.size();
  const double limit_val = limit.at(limit_point[0], limit_point[1]);
  const int limit_row = limit_point[1];

  double conv_err = 0.0;
  for (size_t k = n / 2; k < n; ++k)
    conv_err = std::max(conv_err,
                        std::abs(seq[k].at(points[k][0], points[k][1]) - limit_val));
  if (conv_err > 1e-6)
    throw std::invalid_argument("limsup check: sequence values do not approach the limit value");

  LimsupReport rep;
  rep.convergence_error = conv_err;
  const size_t tail = std::max<size_t>(3, n / 3);

  for (int z : z_samples) {
    if (z < 0 || z >= limit.grid.nx)
      throw std::invalid_argument("limsup check: z sample outside row");
    LimsupEntry e;
    e.z = z;
    for (size_t k = n - tail; k < n; ++k) {
      double thr = seq[k].at(points[k][0], points[k][1]);
      if (seq[k].at(z, points[k][1]) >= thr) {
        e.tail_admits_one = true;
        break;
      }
    }
    double vz = limit.at(z, limit_row);
    e.weak_limit = vz >= limit_val;
    e.strict_limit = vz > limit_val;
    if (e.tail_admits_one && !e.weak_limit) {
      e.kind = LimsupEntry::violation;
      ++rep.violations;
    } else if (e.tail_admits_one && e.weak_limit && !e.strict_limit) {
      e.kind = LimsupEntry::tie;
      ++rep.ties;
    }
    rep.entries.push_back(e);
  }
  return rep;
}

} // namespace nls
