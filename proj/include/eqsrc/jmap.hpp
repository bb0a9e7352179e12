#pragma once

#include "eqsrc/numerics.hpp"

namespace eqsrc {

// Parameters of the transformation
//   J(s) = c1 s + c0 - log((s - 1/2)/(s + 1/2)),
// principal logarithm, defined off [-1/2, 1/2]. J has critical points
// s_a = -sqrt(1/4 + 1/c1) and s_b = +sqrt(1/4 + 1/c1) with a = J(s_a),
// b = J(s_b) the images of the critical points.
struct MapParams {
  double c1;
  double c0;
  double s_a;
  double s_b;
  double a;
  double b;
};

// Point on the arc gamma1 (upper boundary of D), parametrized by its real
// part u; gamma2 is the complex conjugate arc.
struct CurvePoint {
  double u;
  double v;
  Complex s;
};

enum class Side { plus, minus };

MapParams new_map(double c1, double c0);

Complex eval_J(const MapParams& p, Complex s);
Complex eval_J_deriv(const MapParams& p, Complex s);  // c1 - 1/(s^2 - 1/4)

// Height v of gamma1 over u in [s_a, s_b]: the unique v in [0, pi/c1)
// with u^2 = 1/4 + v cot(c1 v) - v^2; zero at the endpoints.
double gamma_height(const MapParams& p, double u);

// Same with gap = s_b^2 - u^2 supplied directly; stable near the endpoints
// where forming the gap from u cancels.
double gamma_height_from_gap(const MapParams& p, double gap);

// dv/du along gamma1 (implicit differentiation of the curve equation);
// v must be gamma_height(u). Unbounded at the endpoints.
double gamma_height_deriv(const MapParams& p, double u, double v);

// I_plus(x) on gamma1 (side = plus) or its conjugate on gamma2,
// for x in (a, b). Bisection in u of the monotone map u -> J(u + i v(u)).
CurvePoint boundary_inverse(const MapParams& p, double x, Side side);

// Inverse branch with values outside closure(D); z off [a, b].
Complex invert_I1(const MapParams& p, Complex z, double tol = 1e-10);

// Inverse branch with values in D \ [-1/2, 1/2]; z in the strip |Im z| < pi,
// off [a, b].
Complex invert_I2(const MapParams& p, Complex z, double tol = 1e-10);

// Open-interior membership: true iff Re s in (s_a, s_b) and
// |Im s| < gamma_height(Re s). Points on gamma itself report false.
bool in_domain_D(const MapParams& p, Complex s);

}  // namespace eqsrc
