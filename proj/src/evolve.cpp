#include "nls/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace nls {

const char* terminal_reason_name(TerminalReason r) {
  switch (r) {
    case TerminalReason::reached_t: return "reached_t";
    case TerminalReason::steady_state: return "steady_state";
    case TerminalReason::instability: return "instability";
  }
  return "unknown";
}

static double curvature_only_rhs(const ScalarField& f, int i, int j, const VelocityParams& p,
                                 double delta) {
  if (p.curvature_coef == 0.0) return 0.0;
  return p.curvature_coef * curvature_term(stencil(f, i, j), delta);
}

static double max_speed_bound(const ScalarField& f, const VelocityParams& p) {
  const GridSpec& g = f.grid;
  if (p.model == Model::volume_power) {
    double area = static_cast<double>(g.node_count()) * g.h * g.h;
    return p.amplitude.max_value() * std::sqrt(area);
  }
  // full-row weighted measure, times the largest amplitude on that row
  double bound = 0.0;
  double full = 0.0;
  for (int i = 0; i < g.nx; ++i) full += p.weight.value(g.x1(i)) * g.h;
  for (int j = 0; j < g.ny; ++j) {
    double amp = 0.0;
    if (p.amplitude.is_const)
      amp = p.amplitude.constant;
    else
      for (int i = 0; i < g.nx; ++i) amp = std::max(amp, p.amplitude.at(i, j));
    bound = std::max(bound, amp * full);
  }
  return bound;
}

double stable_dt(const ScalarField& f, const VelocityParams& p, double cfl_safety,
                 double t_horizon) {
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw std::invalid_argument("cfl_safety must lie in (0, 1]");
  if (!(t_horizon > 0.0)) throw std::invalid_argument("stable_dt needs a positive time horizon");

  double h = f.grid.h;
  double denom = max_speed_bound(f, p) / h + 4.0 * p.curvature_coef / (h * h);
  double cap = t_horizon / 100.0;
  if (denom <= 0.0) return cap;
  return std::min(cfl_safety / denom, cap);
}

std::pair<ScalarField, StepReport> step(const ScalarField& f, const VelocityParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step needs dt > 0");
  auto t0 = std::chrono::steady_clock::now();

  const GridSpec& g = f.grid;
  const double delta = effective_delta(p, f);
  const bool need_row_index =
      (p.model == Model::tomographic || p.model == Model::general_k1) &&
      p.amplitude.max_value() > 0.0;

  RowMeasureIndex idx;
  if (need_row_index) idx = build_row_index(f, p.weight);

  std::vector<double> sorted;
  if (p.model == Model::volume_power && p.amplitude.max_value() > 0.0) {
    sorted = f.values;
    std::sort(sorted.begin(), sorted.end());
  }

  ScalarField out = f;
  double max_rhs = 0.0;
  double max_change = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double rhs;
      switch (p.model) {
        case Model::tomographic:
          rhs = need_row_index ? tomo_rhs_at(f, idx, i, j, p, delta)
                               : curvature_only_rhs(f, i, j, p, delta);
          break;
        case Model::volume_power:
          rhs = sorted.empty() ? curvature_only_rhs(f, i, j, p, delta)
                               : volume_rhs_at(f, sorted, i, j, p, delta);
          break;
        case Model::general_k1:
          rhs = need_row_index ? general_rhs_at(f, idx, i, j, p, delta)
                               : curvature_only_rhs(f, i, j, p, delta);
          break;
        default: rhs = 0.0;
      }
      double nv = f.at(i, j) + dt * rhs;
      if (!std::isfinite(nv)) {
        std::ostringstream msg;
        msg << "instability: non-finite update at node (" << i << "," << j << ")";
        throw InstabilityError(i, j, msg.str());
      }
      out.at(i, j) = nv;
      max_rhs = std::max(max_rhs, std::abs(rhs));
      max_change = std::max(max_change, std::abs(nv - f.at(i, j)));
    }

  long long above = 0;
  for (double v : out.values)
    if (v >= 0.0) ++above;

  StepReport rep;
  rep.dt = dt;
  rep.max_rhs = max_rhs;
  rep.residual = max_change / dt;
  rep.area_zero_superlevel = static_cast<double>(above) * g.h * g.h;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(out), rep};
}

Trajectory evolve(const ScalarField& u0, const VelocityParams& p, double T,
                  const EvolveOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve needs T > 0");
  if (options.snapshot_stride < 1)
    throw std::invalid_argument("snapshot_stride must be >= 1");
  if (options.fixed_dt < 0.0)
    throw std::invalid_argument("fixed_dt must be >= 0 (0 selects the CFL step)");
  if (options.steady_tol < 0.0) throw std::invalid_argument("steady_tol must be >= 0");
  auto t0_wall = std::chrono::steady_clock::now();

  double tol = options.steady_tol;
  if (tol <= 0.0) tol = 1e-4 * oscillation(u0) / T;

  std::vector<double> marks = options.snapshot_times;
  std::sort(marks.begin(), marks.end());
  size_t next_mark = 0;

  Trajectory traj;
  traj.snapshots.emplace_back(0.0, u0);

  ScalarField u = u0;
  double t = 0.0;
  int steady_run = 0;
  const double t_eps = 1e-12 * T;

  while (t < T - t_eps) {
    double dt = options.fixed_dt > 0.0 ? options.fixed_dt
                                       : stable_dt(u, p, options.cfl_safety, T);
    dt = std::min(dt, T - t);
    while (next_mark < marks.size() && marks[next_mark] <= t + t_eps) ++next_mark;
    if (next_mark < marks.size()) dt = std::min(dt, marks[next_mark] - t);

    StepReport rep;
    try {
      auto [nu, r] = step(u, p, dt);
      u = std::move(nu);
      rep = r;
    } catch (const InstabilityError&) {
      traj.reason = TerminalReason::instability;
      traj.snapshots.emplace_back(t, u); // last good field
      traj.final_time = t;
      traj.total_wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_wall).count();
      return traj;
    }

    t += dt;
    ++traj.steps;
    rep.t = t;
    traj.metrics.push_back(rep);

    bool at_mark = next_mark < marks.size() && std::abs(t - marks[next_mark]) <= t_eps;
    if (at_mark) ++next_mark;
    if (at_mark || traj.steps % options.snapshot_stride == 0)
      traj.snapshots.emplace_back(t, u);

    steady_run = rep.residual < tol ? steady_run + 1 : 0;
    if (steady_run >= 10) {
      traj.reason = TerminalReason::steady_state;
      break;
    }
  }

  if (traj.reason != TerminalReason::steady_state) traj.reason = TerminalReason::reached_t;
  if (traj.snapshots.back().first != t) traj.snapshots.emplace_back(t, u);
  traj.final_time = t;
  traj.total_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_wall).count();
  return traj;
}

} // namespace nls
