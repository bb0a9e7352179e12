#pragma once

#include <vector>

#include "eqsrc/field.hpp"
#include "eqsrc/jmap.hpp"
#include "eqsrc/numerics.hpp"
#include "eqsrc/parallel.hpp"

namespace eqsrc {

enum class ContourWeight { one, pole_at_half };

// (1/2 pi i) oint_gamma V'(J_{c1,c0}(s)) w(s) ds with w = 1 or 1/(s - 1/2),
// gamma counterclockwise around [-1/2, 1/2], reduced by Schwarz symmetry to
// -(1/pi) Im of the integral over gamma1 traversed left to right.
double contour_integral_Vprime(const FieldSpec& field, double c1, double c0,
                               ContourWeight w, double tol = 1e-12);

// c0 solving the pole_at_half moment condition = 1 at fixed c1.
double solve_c0(const FieldSpec& field, double c1);

// Nested solve: outer bracketed root in c1 of the weight-one condition,
// inner solve_c0. The curve gamma depends only on c1 and is cached across
// the inner iteration.
MapParams solve_parameters(const FieldSpec& field);

struct RegularityReport {
  bool normalization_ok = false;  // (i)
  bool positivity_ok = false;     // (ii)
  bool edge_ok = false;           // (iii)
  bool var_eq_ok = false;         // (iv)
  bool var_ineq_ok = false;       // (v)
  double normalization_residual = 0.0;  // |int psi - 1|
  double min_density = 0.0;             // over a 200-point interior grid
  double edge_limit_a = 0.0;            // psi(x)/sqrt(x-a) estimate
  double edge_limit_b = 0.0;
  double edge_ratio_dev = 0.0;          // worst deviation of successive ratios from 1
  double var_eq_residual = 0.0;         // worst |g_+ + gt_- - V - ell| on 100 points
  double var_ineq_margin = 0.0;         // min of -(g + gt - V - ell) at 20 exterior points
  bool one_cut_regular() const {
    return normalization_ok && positivity_ok && edge_ok && var_eq_ok && var_ineq_ok;
  }
};

struct Atom {
  double x;
  double mass;
};

// Discretized two-kernel energy: log kernels over unordered atom pairs
// (diagonal excluded), the field term summed exactly.
double energy(const FieldSpec& field, const std::vector<Atom>& atoms);

enum class Edge { a, b };
enum class GFun { g, g_tilde };

// Equilibrium measure for a (solved or supplied) parameter pair: density
// with endpoint-clustered sampling grid, g-functions, ell, phi, conformal
// edge coordinates, and the regularity report. Immutable after build; all
// evaluators are const and safe to call concurrently.
class EquilibriumData {
 public:
  struct Options {
    int grid_points = 481;
    double tol = 1e-11;
    par::Mode mode = par::default_mode();
  };

  static EquilibriumData build(const FieldSpec& field, const Options& opts);
  static EquilibriumData build(const FieldSpec& field) { return build(field, Options{}); }
  static EquilibriumData build_with_map(const FieldSpec& field, const MapParams& map,
                                        const Options& opts);
  static EquilibriumData build_with_map(const FieldSpec& field, const MapParams& map) {
    return build_with_map(field, map, Options{});
  }

  const FieldSpec& field() const { return field_; }
  const MapParams& map() const { return map_; }
  double ell() const { return ell_; }
  double ell_from_a() const { return ell_a_; }
  double tol() const { return tol_; }

  // Interpolated density (fast path used by the integral evaluators).
  double density(double x) const;
  // Route 1: the V'' log-ratio integral.
  double density_exact(double x) const;
  // Route 2: boundary values of M via principal-value integrals over gamma.
  double density_via_M(double x) const;

  double mass_to_b(double x) const;    // mu([x, b])
  double mass_from_a(double x) const;  // mu([a, x])

  Complex eval_g(Complex z, GFun which) const;
  // One-sided boundary values on the real axis, side = +1 (from above) / -1.
  Complex eval_g_side(double x, GFun which, int side) const;

  Complex eval_phi(Complex z) const;
  Complex eval_phi_side(double x, int side) const;
  // g(x) + gt(x) - V(x) - ell with opposite-side boundary values: real on
  // the whole axis, zero on [a, b], negative outside for one-cut fields.
  double variational_lhs(double x) const;

  Complex eval_f_edge(Complex z, Edge edge) const;
  double f_edge_slope(Edge edge) const;  // f_b'(b) > 0, f_a'(a) < 0

  RegularityReport check_one_cut_regular() const;

  // Curve gamma1 sampled over theta in [0, pi]; x(theta) runs from a to b.
  double grid_x(int i) const { return xs_[i]; }
  double grid_psi(int i) const { return psis_[i]; }
  int grid_size() const { return static_cast<int>(xs_.size()); }
  double x_of_theta(double theta) const;
  double theta_of_x(double x) const;
  Complex curve_point(double theta) const;
  Complex curve_deriv(double theta) const;

 private:
  EquilibriumData() = default;
  void build_grids(const Options& opts);
  double log_kernel_integral(double x) const;  // int log|x-t| psi(t) dt
  double exp_kernel_smooth(double x) const;    // int log|(e^x-e^t)/(x-t)| psi dt
  double theta_integral(const std::function<double(double)>& f, double tol) const;

  FieldSpec field_ = FieldSpec::quadratic(1.0);
  MapParams map_{};
  double ell_ = 0.0, ell_a_ = 0.0;
  double tol_ = 1e-11;
  std::vector<double> thetas_, xs_, psis_;
  CubicSpline psi_spline_;     // psi over theta
  CubicSpline curve_u_, curve_v_;  // I_plus over theta
};

// M(s) of the scalar Riemann-Hilbert problem: outside formula off
// closure(D), inside formula in D. Throws near-singular-error within 1e-8
// of gamma.
Complex eval_M(const EquilibriumData& eq, Complex s);

}  // namespace eqsrc
