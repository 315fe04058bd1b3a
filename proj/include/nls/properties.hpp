#pragma once

#include "nls/contour.hpp"
#include "nls/evolve.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace nls {

// Constants for the analytic barrier g(x,t) = e^{At}/(1+|x|^2) - 1. The drift
// bound ties A to the growth constants: A <= -(3 L1 + 2 C_ball L1 + 2 (L2+1) (2N+3))
// where C_ball is the unit-ball measure in the slice dimension, to the power of
// its inverse.
struct SubsolutionParams {
  double L1 = 1.0;
  double L2 = 1.0;
  int N = 2;
  int k = 1;
  double A = -35.0;
};

double subsolution_ball_coef(int N, int k);          // C_ball for the N-k dimensional slice
double subsolution_required_bound(const SubsolutionParams& sp); // the -(...) threshold

// Validates N >= 2, 1 <= k < N, L1, L2 >= 0, and A <= required bound.
SubsolutionParams make_subsolution_params(double L1, double L2, int N, int k, double A);

// The drift expression evaluated with the proof's Hessian bound; <= 0 whenever
// A satisfies the constraint. Equals A exactly at x = 0, t = 0.
double barrier_residual(double x1, double x2, double t, const SubsolutionParams& sp);

// Same expression with the exact Hessian infinity norm instead of the bound;
// dominated by barrier_residual.
double barrier_residual_exact_hessian(double x1, double x2, double t,
                                      const SubsolutionParams& sp);

struct ComparisonReport {
  double sup_violation = 0.0;     // max over time of max over nodes of (u - v)+
  double first_violation_time = -1.0;
  int steps = 0;
};

// Co-evolves the ordered pair with a shared dt schedule. Throws unless
// u0 <= v0 everywhere (exact comparisons).
ComparisonReport check_comparison(const ScalarField& u0, const ScalarField& v0,
                                  const VelocityParams& p, double T, double cfl_safety);

struct RelabelReport {
  std::vector<double> times;
  std::vector<double> hausdorff;
};

// Evolves u0 and psi(u0) (psi strictly increasing with psi(0) = 0) under the
// same params and shared dt, comparing zero contours at the requested times.
// Both copies run with mirror ghosts so the relabeling commutes with the
// boundary policy.
RelabelReport check_relabel(const ScalarField& u0, const std::function<double(double)>& psi,
                            const VelocityParams& p, double T, const std::vector<double>& times,
                            double cfl_safety);

struct EnvelopeRung {
  double eps_p = 0.0;
  double delta = 0.0;
  double max_spread = 0.0;
};

struct EnvelopeReport {
  std::vector<EnvelopeRung> rungs;       // spread of rhs over nonlocal-set choices at |p| <= eps_p
  double zero_p_spread = 0.0;      // spread at exactly p = 0 (must be 0)
  double zero_p_curvature = 0.0;   // curvature at p = 0, zero Hessian (must be 0)
};

// At near-flat nodes the nonlocal factor is multiplied by a vanishing gradient,
// so the rhs envelope over admissible set choices collapses; quantifies that on
// synthetic stencils for a ladder of (eps_p, delta).
EnvelopeReport audit_envelope(const VelocityParams& p, int n_samples, std::uint64_t seed);

} // namespace nls
