#pragma once

#include "nls/front_init.hpp"
#include "nls/grid.hpp"
#include "nls/velocity.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nls {

struct GridConfig {
  double origin_x = -2.0, origin_y = -2.0;
  double h = 0.01;
  int nx = 401, ny = 401;
  BoundaryMode boundary = BoundaryMode::clamp_minus_one;
  bool operator==(const GridConfig&) const = default;
};

struct InitConfig {
  ShapeKind shape = ShapeKind::disk;
  double center_x = 0.0, center_y = 0.0;
  double radius = 0.8;
  double half_width_x1 = 0.5, half_width_x2 = 0.25;
  double r_inner = 0.3, r_outer = 0.6;
  bool class_c = true;
  std::uint64_t perturb_seed = 0;
  double perturb_amp = 0.0;
  int perturb_modes = 4;
  bool operator==(const InitConfig&) const = default;
};

struct VelocityConfig {
  Model model = Model::tomographic;
  double amplitude = 1.0;
  std::string weight = "constant:1"; // constant:<g> | file:<path>
  double curvature_coef = 1.0;
  double grad_delta = 0.0; // 0 = auto
  bool operator==(const VelocityConfig&) const = default;
};

struct TimeConfig {
  double T = 0.2;
  double cfl_safety = 0.5;
  int snapshot_stride = 10;
  double steady_tol = 0.0; // 0 = auto
  bool operator==(const TimeConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  bool snapshots = true;
  bool metrics = true;
  bool contours = true;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  InitConfig init;
  VelocityConfig velocity;
  TimeConfig time;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;
};

struct ConfigError {
  int line = 0; // 0 when the key was never set (defaults interacting badly)
  std::string message;
};

struct ConfigParseError : std::runtime_error {
  std::vector<ConfigError> errors;
  explicit ConfigParseError(std::vector<ConfigError> errs);
};

// "key = value" lines under [grid] / [init] / [velocity] / [time] / [output]
// headers; '#' and ';' comments. Every problem is collected (unknown keys,
// malformed values, constraint violations) and thrown together, each with its
// line number. weight_key_present reports whether the config named g explicitly.
RunConfig parse_config(std::istream& is, bool* weight_key_present = nullptr);
RunConfig parse_config_string(const std::string& text, bool* weight_key_present = nullptr);
RunConfig parse_config_file(const std::string& path, bool* weight_key_present = nullptr);

// Canonical form: parse(print(cfg)) == cfg.
std::string print_config(const RunConfig& cfg);

// Materialize the configured pieces.
GridSpec grid_from_config(const RunConfig& cfg);
Shape shape_from_config(const RunConfig& cfg);
ScalarField initial_field_from_config(const RunConfig& cfg);
WeightTable weight_from_config(const RunConfig& cfg); // loads file: sources
VelocityParams params_from_config(const RunConfig& cfg);

} // namespace nls
