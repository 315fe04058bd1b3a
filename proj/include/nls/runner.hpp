#pragma once

#include "nls/config.hpp"
#include "nls/evolve.hpp"
#include "nls/properties.hpp"
#include "nls/tomo.hpp"

#include <string>
#include <vector>

namespace nls {

// Exit codes shared by the CLI and the test harness.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInstability = 1;
inline constexpr int kExitConfigError = 2;

// Smooth random field built from a handful of low-frequency modes, values well
// inside (-1, 1); the building block for randomized property scenarios.
ScalarField make_smooth_field(const GridSpec& g, BoundaryMode mode, std::uint64_t seed);

// Ordered pair u0 <= v0: a smooth field plus a strictly positive smooth gap.
std::pair<ScalarField, ScalarField> make_ordered_pair(const GridSpec& g, BoundaryMode mode,
                                                      std::uint64_t seed);

void write_metrics_jsonl(const Trajectory& traj, std::ostream& os);

// run: evolve the configured initial field and write snapshots / metrics /
// contours / summary under the output dir.
int run_simulation(const RunConfig& cfg, const std::string& out_override,
                   bool weight_key_present);

// check <name>: named property checks writing <name>_report.json.
// Names: comparison, relabel, barrier, metric, limsup, envelope, set_monotone.
int run_check(const std::string& name, const RunConfig& cfg, const std::string& out_override);
std::vector<std::string> check_names();

// Built-in demo configurations (also the defaults when no --config is given).
RunConfig demo_rectangle_config();
RunConfig demo_tomo_config();

int run_demo_rectangle(const RunConfig& cfg, const std::string& out_override);
int run_demo_tomo(const RunConfig& cfg, const std::string& out_override);

// The synthetic-data gate used by the tomography demo: amplitude field
// beta * max(phi(x) + lift, 0) built from the phantom's own level-set field phi.
Amplitude make_phantom_gate(const Phantom& ph, double beta, double lift);

} // namespace nls
