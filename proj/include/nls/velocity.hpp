#pragma once

#include "nls/grid.hpp"
#include "nls/nonlocal.hpp"

#include <cstdint>
#include <optional>

namespace nls {

// Speed amplitude C(x): positive constant or a sampled coefficient field with a
// stated Lipschitz bound. C = 0 is accepted as the curvature-only degenerate case.
struct Amplitude {
  bool is_const = true;
  double constant = 1.0;
  std::optional<ScalarField> field;
  double lipschitz = 0.0;

  double at(int i, int j) const { return is_const ? constant : field->at(i, j); }
  double max_value() const;
};

Amplitude make_constant_amplitude(double c);
Amplitude make_field_amplitude(ScalarField c, double lipschitz_bound);

enum class Model {
  tomographic,  // row-measure speed paired with |d1 u|, plus curvature
  volume_power, // sqrt of superlevel area paired with the full upwind gradient
  general_k1    // row-measure speed paired with the full upwind gradient
};

struct VelocityParams {
  Model model = Model::tomographic;
  Amplitude amplitude;
  WeightTable weight;
  double curvature_coef = 1.0;
  double grad_delta = 0.0; // 0 = auto: 1e-6 * oscillation(u)
};

VelocityParams make_velocity_params(Model model, Amplitude amplitude, WeightTable weight,
                                    double curvature_coef, double grad_delta);

// delta actually used for a given field.
double effective_delta(const VelocityParams& p, const ScalarField& f);

// One-sided and centered differences at a node, ghost policy applied.
struct StencilSample {
  double d1m, d1p, d2m, d2p; // one-sided first differences
  double p1, p2;             // centered first derivatives
  double u11, u22, u12;      // second derivatives
};

StencilSample stencil(const ScalarField& f, int i, int j);

// Monotone |d1 u| for expansion speed c >= 0 (throws if c < 0):
// sqrt(min(d1m,0)^2 + max(d1p,0)^2).
double upwind_grad1(const StencilSample& s, double c);

// Same construction over both axes, for the volume_power / general_k1 models.
double upwind_grad2(const StencilSample& s, double c);

// (u11*(p2^2 + d^2/2) + u22*(p1^2 + d^2/2) - 2*u12*p1*p2) / (p1^2 + p2^2 + d^2);
// at p = 0 this degrades to (u11 + u22)/2. Requires delta > 0.
double curvature_term(const StencilSample& s, double delta);

// Right-hand sides at one node. The index/sorted overloads are the fast routes
// used by the time stepper; the plain ones rescan the grid and serve as oracles.
double tomo_rhs_at(const ScalarField& f, const RowMeasureIndex& idx, int i, int j,
                   const VelocityParams& p, double delta);
double tomo_rhs_at(const ScalarField& f, int i, int j, const VelocityParams& p);

double volume_rhs_at(const ScalarField& f, const std::vector<double>& sorted_values, int i, int j,
                     const VelocityParams& p, double delta);
double volume_rhs_at(const ScalarField& f, int i, int j, const VelocityParams& p);

double general_rhs_at(const ScalarField& f, const RowMeasureIndex& idx, int i, int j,
                      const VelocityParams& p, double delta);

// Enlarging the nonlocal set (by lowering the threshold) must not decrease the
// advective speed. Samples random interior nodes and random lowered thresholds.
struct SetMonotonicityReport {
  int samples = 0;
  int violations = 0;
  double max_violation = 0.0;
};

SetMonotonicityReport check_set_monotonicity(const VelocityParams& p, const ScalarField& f, int n_samples,
                           std::uint64_t seed);

} // namespace nls
