#include "nls/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nls {

static const double kPi = 3.14159265358979323846;

double subsolution_ball_coef(int N, int k) {
  int m = N - k;
  // Lebesgue measure of the unit ball in R^m, to the power 1/m.
  double vol = std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  return std::pow(vol, 1.0 / m);
}

double subsolution_required_bound(const SubsolutionParams& sp) {
  double c = subsolution_ball_coef(sp.N, sp.k);
  return -(3.0 * sp.L1 + 2.0 * c * sp.L1 + 2.0 * (sp.L2 + 1.0) * (2.0 * sp.N + 3.0));
}

SubsolutionParams make_subsolution_params(double L1, double L2, int N, int k, double A) {
  if (N < 2 || k < 1 || k >= N) throw std::invalid_argument("need N >= 2 and 1 <= k < N");
  if (!(L1 >= 0.0) || !(L2 >= 0.0)) throw std::invalid_argument("L1, L2 must be >= 0");
  SubsolutionParams sp{L1, L2, N, k, A};
  if (!(A <= subsolution_required_bound(sp)))
    throw std::invalid_argument("A exceeds the admissible subsolution drift bound");
  return sp;
}

double barrier_residual(double x1, double x2, double t, const SubsolutionParams& sp) {
  double r2 = x1 * x1 + x2 * x2;
  double r = std::sqrt(r2);
  double w = 1.0 + r2;
  double e = std::exp(sp.A * t);
  double c = subsolution_ball_coef(sp.N, sp.k);
  double grad_mag = 2.0 * e * r / (w * w);
  double hess_bound = 2.0 * e * (2.0 * sp.N + 3.0) / (w * w);
  return sp.A * e / w                 // time derivative
         + sp.L1 * (1.0 + r) * grad_mag   // drift against the gradient
         + sp.L1 * (c * r) * grad_mag     // nonlocal slice measure bound
         + (sp.L2 + 1.0) * r2 * hess_bound;
}

double barrier_residual_exact_hessian(double x1, double x2, double t,
                                      const SubsolutionParams& sp) {
  double r2 = x1 * x1 + x2 * x2;
  double r = std::sqrt(r2);
  double w = 1.0 + r2;
  double e = std::exp(sp.A * t);
  double c = subsolution_ball_coef(sp.N, sp.k);
  double grad_mag = 2.0 * e * r / (w * w);

  // H_ij = e^{At} (8 x_i x_j / w^3 - 2 delta_ij / w^2); infinity norm = max row sum
  double x[2] = {x1, x2};
  double norm = 0.0;
  for (int i = 0; i < 2; ++i) {
    double row = 0.0;
    for (int j = 0; j < 2; ++j) {
      double hij = 8.0 * x[i] * x[j] / (w * w * w) - (i == j ? 2.0 / (w * w) : 0.0);
      row += std::abs(hij);
    }
    norm = std::max(norm, e * row);
  }
  return sp.A * e / w + sp.L1 * (1.0 + r) * grad_mag + sp.L1 * (c * r) * grad_mag +
         (sp.L2 + 1.0) * r2 * norm;
}

ComparisonReport check_comparison(const ScalarField& u0, const ScalarField& v0,
                                  const VelocityParams& p, double T, double cfl_safety) {
  if (u0.grid != v0.grid || u0.mode != v0.mode)
    throw std::invalid_argument("check_comparison: fields must share grid and ghost policy");
  if (!(T > 0.0)) throw std::invalid_argument("check_comparison needs T > 0");
  for (size_t k = 0; k < u0.values.size(); ++k)
    if (!(u0.values[k] <= v0.values[k]))
      throw std::invalid_argument("check_comparison: u0 <= v0 violated at a node");

  ComparisonReport rep;
  ScalarField u = u0, v = v0;
  double t = 0.0;
  const double t_eps = 1e-12 * T;
  while (t < T - t_eps) {
    double dt = std::min(stable_dt(u, p, cfl_safety, T), stable_dt(v, p, cfl_safety, T));
    dt = std::min(dt, T - t);
    u = step(u, p, dt).first;
    v = step(v, p, dt).first;
    t += dt;
    ++rep.steps;
    double worst = 0.0;
    for (size_t k = 0; k < u.values.size(); ++k)
      worst = std::max(worst, u.values[k] - v.values[k]);
    if (worst > 0.0) {
      rep.sup_violation = std::max(rep.sup_violation, worst);
      if (rep.first_violation_time < 0.0) rep.first_violation_time = t;
    }
  }
  return rep;
}

RelabelReport check_relabel(const ScalarField& u0, const std::function<double(double)>& psi,
                            const VelocityParams& p, double T, const std::vector<double>& times,
                            double cfl_safety) {
  if (!(T > 0.0)) throw std::invalid_argument("check_relabel needs T > 0");
  if (psi(0.0) != 0.0) throw std::invalid_argument("relabeling must fix zero: psi(0) = 0");
  // strict monotonicity over the field's value range
  double lo = min_value(u0) - 0.1, hi = max_value(u0) + 0.1;
  double prev = psi(lo);
  for (int k = 1; k <= 1000; ++k) {
    double s = lo + (hi - lo) * k / 1000.0;
    double cur = psi(s);
    if (!(cur > prev))
      throw std::invalid_argument("relabeling must be strictly increasing on the value range");
    prev = cur;
  }

  ScalarField u = u0;
  u.mode = BoundaryMode::mirror;
  ScalarField v = u;
  for (double& s : v.values) s = psi(s);
  require_finite(v, "check_relabel");

  std::vector<double> marks = times;
  std::sort(marks.begin(), marks.end());
  RelabelReport rep;

  double t = 0.0;
  size_t next = 0;
  const double t_eps = 1e-12 * T;
  while (t < T - t_eps && next < marks.size()) {
    double dt = std::min(stable_dt(u, p, cfl_safety, T), stable_dt(v, p, cfl_safety, T));
    dt = std::min(dt, T - t);
    if (next < marks.size()) dt = std::min(dt, marks[next] - t);
    u = step(u, p, dt).first;
    v = step(v, p, dt).first;
    t += dt;
    if (std::abs(t - marks[next]) <= t_eps) {
      rep.times.push_back(marks[next]);
      rep.hausdorff.push_back(
          hausdorff_distance(extract_contour(u, 0.0), extract_contour(v, 0.0)));
      ++next;
    }
  }
  return rep;
}

EnvelopeReport audit_envelope(const VelocityParams& p, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("audit_envelope needs n_samples >= 1");
  EnvelopeReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> measure(0.0, 4.0);
  double amp = p.amplitude.is_const ? p.amplitude.constant : 1.0;

  const double ladder_eps[4] = {1e-1, 1e-2, 1e-4, 1e-6};
  const double ladder_delta[4] = {1e-2, 1e-4, 1e-6, 1e-8};
  for (int rung = 0; rung < 4; ++rung) {
    double eps_p = ladder_eps[rung];
    double delta = ladder_delta[rung];
    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
      StencilSample st;
      st.d1m = eps_p * unit(rng);
      st.d1p = eps_p * unit(rng);
      st.d2m = eps_p * unit(rng);
      st.d2p = eps_p * unit(rng);
      st.p1 = 0.5 * (st.d1m + st.d1p);
      st.p2 = 0.5 * (st.d2m + st.d2p);
      st.u11 = 4.0 * unit(rng);
      st.u22 = 4.0 * unit(rng);
      st.u12 = 4.0 * unit(rng);
      double curv = p.curvature_coef * curvature_term(st, delta);
      double grad = p.model == Model::tomographic ? upwind_grad1(st, 0.0) : upwind_grad2(st, 0.0);
      // two admissible nonlocal sets -> two speeds; the envelope width at this node
      double m1 = measure(rng), m2 = measure(rng);
      double spread = std::abs(amp * m1 * grad + curv - (amp * m2 * grad + curv));
      worst = std::max(worst, spread);
    }
    rep.rungs.push_back({eps_p, delta, worst});
  }

  // exactly flat node: the nonlocal term must vanish no matter the set
  StencilSample flat{};
  double g1 = upwind_grad1(flat, 0.0);
  rep.zero_p_spread = std::abs(amp * measure(rng) * g1 - amp * measure(rng) * g1);
  rep.zero_p_curvature = curvature_term(flat, 1e-8);
  return rep;
}

} // namespace nls
