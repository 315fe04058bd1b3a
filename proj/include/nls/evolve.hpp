#pragma once

#include "nls/velocity.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace nls {

enum class TerminalReason { reached_t, steady_state, instability };

const char* terminal_reason_name(TerminalReason r);

struct StepReport {
  double t = 0.0;  // time after the step
  double dt = 0.0;
  double max_rhs = 0.0;
  double residual = 0.0; // max node change / dt
  double area_zero_superlevel = 0.0;
  double wall_seconds = 0.0;
};

struct InstabilityError : std::runtime_error {
  int i, j;
  InstabilityError(int i_, int j_, const std::string& msg)
      : std::runtime_error(msg), i(i_), j(j_) {}
};

struct EvolveOptions {
  double cfl_safety = 0.5;
  int snapshot_stride = 10;            // steps between stored snapshots
  double steady_tol = 0.0;             // 0 = auto: 1e-4 * oscillation(u0) / T
  double fixed_dt = 0.0;               // expert: bypass stable_dt (still clipped to T and snapshot times)
  std::vector<double> snapshot_times;  // extra exact-time snapshots; dt is clipped to land on them
};

struct Trajectory {
  std::vector<std::pair<double, ScalarField>> snapshots;
  std::vector<StepReport> metrics;
  TerminalReason reason = TerminalReason::reached_t;
  int steps = 0;
  double final_time = 0.0;
  double total_wall_seconds = 0.0;
};

// cfl_safety / (max_c_bound/h + 4*kappa/h^2), capped at t_horizon/100. The speed
// bound is the largest possible advective factor: max over the grid of
// C * (full-row weighted measure) for the row models, C * sqrt(domain area) for
// volume_power.
double stable_dt(const ScalarField& f, const VelocityParams& p, double cfl_safety,
                 double t_horizon);

// One forward-Euler update over the whole grid, rebuilding the nonlocal index.
// Throws InstabilityError naming the first non-finite node.
std::pair<ScalarField, StepReport> step(const ScalarField& f, const VelocityParams& p, double dt);

// Runs until t = T, or the residual stays below steady_tol for 10 consecutive
// steps, or a step goes non-finite (the last good field stays attached as the
// final snapshot and the reason reads instability). Throws on T <= 0.
Trajectory evolve(const ScalarField& u0, const VelocityParams& p, double T,
                  const EvolveOptions& options);

} // namespace nls
