#include "eqsrc/jmap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eqsrc/errors.hpp"

namespace eqsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// v * cot(c1 v) - 1/c1, series near v = 0 to avoid cancellation.
double v_cot_c1v_minus(double c1, double v) {
  double y = c1 * v;
  if (std::abs(y) < 1e-2) {
    double y2 = y * y;
    return -v * y * (1.0 / 3.0 + y2 / 45.0 + 2.0 * y2 * y2 / 945.0);
  }
  return v * std::cos(y) / std::sin(y) - 1.0 / c1;
}

// Residual of the curve equation at height v, written against the gap
// s_b^2 - u^2 (note s_b^2 = 1/4 + 1/c1).
double curve_residual_gap(const MapParams& p, double gap, double v) {
  return v_cot_c1v_minus(p.c1, v) - v * v + gap;
}

// d/dv of 1/4 + v cot(c1 v) - v^2 = cot(y) - y csc^2(y) - 2v, y = c1 v.
double curve_residual_deriv(const MapParams& p, double v) {
  double y = p.c1 * v;
  if (std::abs(y) < 1e-2) {
    return -2.0 * v - (2.0 / 3.0) * y - (4.0 / 45.0) * y * y * y;
  }
  double s = std::sin(y), c = std::cos(y);
  return c / s - y / (s * s) - 2.0 * v;
}

bool on_log_cut(Complex s) {
  return s.imag() == 0.0 && s.real() >= -0.5 && s.real() <= 0.5;
}

// J on the real axis off [-1/2, 1/2].
double J_real_ray(const MapParams& p, double t) {
  return p.c1 * t + p.c0 - std::log((t - 0.5) / (t + 0.5));
}

}  // namespace

MapParams new_map(double c1, double c0) {
  if (!(c1 > 0.0)) fail("invalid-argument", "new_map: c1 must be positive");
  MapParams p;
  p.c1 = c1;
  p.c0 = c0;
  p.s_b = std::sqrt(0.25 + 1.0 / c1);
  p.s_a = -p.s_b;
  // J is real on the rays beyond the critical points.
  p.b = c1 * p.s_b + c0 - std::log((p.s_b - 0.5) / (p.s_b + 0.5));
  p.a = c1 * p.s_a + c0 - std::log((p.s_a - 0.5) / (p.s_a + 0.5));
  return p;
}

Complex eval_J(const MapParams& p, Complex s) {
  if (on_log_cut(s))
    fail("domain-error", "eval_J: s lies on the segment [-1/2, 1/2]");
  return p.c1 * s + p.c0 - std::log((s - 0.5) / (s + 0.5));
}

Complex eval_J_deriv(const MapParams& p, Complex s) {
  return p.c1 - 1.0 / (s * s - 0.25);
}

double gamma_height_from_gap(const MapParams& p, double gap) {
  if (gap <= 0.0) return 0.0;
  double vmax = kPi / p.c1;
  // seed: the linearized equation gap = (1 + c1/3) v^2
  double v = std::sqrt(gap / (1.0 + p.c1 / 3.0));
  if (v >= 0.9 * vmax) v = 0.9 * vmax;
  double lo = 0.0, hi = vmax * (1.0 - 1e-12);
  while (curve_residual_gap(p, gap, hi) > 0.0) {
    hi = 0.5 * (hi + vmax);
    if (vmax - hi < 1e-300)
      fail("convergence-error", "gamma_height: bracket collapse at v -> pi/c1");
  }
  // residual strictly decreasing in v on (0, pi/c1): bisect, then polish
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (curve_residual_gap(p, gap, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  v = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    double step = curve_residual_gap(p, gap, v) / curve_residual_deriv(p, v);
    double vn = v - step;
    if (vn > lo - (hi - lo) && vn < hi + (hi - lo) && vn > 0.0 && vn < vmax) v = vn;
  }
  return v;
}

double gamma_height(const MapParams& p, double u) {
  if (u < p.s_a - 1e-12 || u > p.s_b + 1e-12)
    fail("domain-error", "gamma_height: u outside [s_a, s_b]");
  double uu = std::min(std::abs(u), p.s_b);
  return gamma_height_from_gap(p, (p.s_b - uu) * (p.s_b + uu));
}

double gamma_height_deriv(const MapParams& p, double u, double v) {
  return 2.0 * u / curve_residual_deriv(p, v);
}

bool in_domain_D(const MapParams& p, Complex s) {
  if (!(s.real() > p.s_a && s.real() < p.s_b)) return false;
  return std::abs(s.imag()) < gamma_height(p, s.real());
}

namespace {

// Real coordinate J(u + i v(u)) along gamma1; strictly increasing in u.
double curve_x(const MapParams& p, double u) {
  double v = gamma_height(p, u);
  if (v == 0.0) return u >= 0 ? p.b : p.a;
  Complex s(u, v);
  return (p.c1 * s + p.c0 - std::log((s - 0.5) / (s + 0.5))).real();
}

bool in_closed_D(const MapParams& p, Complex s) {
  if (s.real() < p.s_a || s.real() > p.s_b) return false;
  return std::abs(s.imag()) <= gamma_height(p, s.real());
}

// Damped Newton for J(s) = z restricted by an acceptance predicate.
template <class Acceptable>
bool newton_J(const MapParams& p, Complex z, Complex s0, double tol,
              const Acceptable& ok, Complex& out) {
  Complex s = s0;
  if (!ok(s) || on_log_cut(s)) return false;
  double res = std::abs(eval_J(p, s) - z);
  for (int it = 0; it < 100; ++it) {
    if (res <= tol * (1.0 + std::abs(z))) {
      out = s;
      return true;
    }
    Complex step = (eval_J(p, s) - z) / eval_J_deriv(p, s);
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h < 50; ++h) {
      Complex cand = s - lambda * step;
      if (!on_log_cut(cand) && ok(cand)) {
        double r2 = std::abs(eval_J(p, cand) - z);
        if (r2 < res || (lambda < 1e-4 && std::isfinite(r2))) {
          s = cand;
          res = r2;
          moved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) return false;
  }
  return false;
}

}  // namespace

CurvePoint boundary_inverse(const MapParams& p, double x, Side side) {
  if (!(x > p.a && x < p.b))
    fail("domain-error", "boundary_inverse: x outside (a, b)");
  double lo = p.s_a, hi = p.s_b;
  for (int it = 0; it < 90; ++it) {
    double mid = 0.5 * (lo + hi);
    if (curve_x(p, mid) < x)
      lo = mid;
    else
      hi = mid;
  }
  double u = 0.5 * (lo + hi);
  double v = gamma_height(p, u);
  CurvePoint cp;
  cp.u = u;
  cp.v = v;
  cp.s = (side == Side::plus) ? Complex(u, v) : Complex(u, -v);
  return cp;
}

Complex invert_I1(const MapParams& p, Complex z, double tol) {
  if (z.imag() == 0.0) {
    double x = z.real();
    if (x >= p.a && x <= p.b)
      fail("domain-error", "invert_I1: z lies on the support [a, b]");
    if (x > p.b) {
      // J increases from b to +inf on (s_b, inf).
      double hi = p.s_b + 1.0;
      while (J_real_ray(p, hi) < x) hi = p.s_b + 2.0 * (hi - p.s_b);
      double s = find_root(
          [&](double t) { return p.c1 * t + p.c0 - std::log((t - 0.5) / (t + 0.5)) - x; },
          p.s_b, hi, 1e-14 * std::max(1.0, std::abs(hi)));
      return Complex(s, 0.0);
    }
    double lo = p.s_a - 1.0;
    while (J_real_ray(p, lo) > x) lo = p.s_a + 2.0 * (lo - p.s_a);
    double s = find_root(
        [&](double t) { return p.c1 * t + p.c0 - std::log((t - 0.5) / (t + 0.5)) - x; },
        lo, p.s_a, 1e-14 * std::max(1.0, std::abs(lo)));
    return Complex(s, 0.0);
  }

  bool flip = z.imag() < 0.0;
  Complex zz = flip ? std::conj(z) : z;
  // J maps the upper half plane minus closure(D) onto the upper half plane,
  // so the iteration may be confined there.
  auto ok = [&](Complex s) {
    return s.imag() > 0.0 && !in_closed_D(p, s) && std::isfinite(s.real()) &&
           std::isfinite(s.imag()) && std::abs(s) < 1e12;
  };

  std::vector<Complex> starts;
  starts.push_back((zz - p.c0) / p.c1);
  {
    double xc = std::clamp(zz.real(), p.a + 1e-3 * (p.b - p.a), p.b - 1e-3 * (p.b - p.a));
    CurvePoint cp = boundary_inverse(p, xc, Side::plus);
    starts.push_back(Complex(cp.u, cp.v + std::max(0.05, zz.imag() / p.c1)));
  }
  starts.push_back(Complex(p.s_b + 1.0, 0.7));
  starts.push_back(Complex(-p.s_b - 1.0, 0.7));
  starts.push_back(Complex(0.0, gamma_height(p, 0.0) + 1.0));

  Complex s;
  for (const Complex& s0 : starts)
    if (newton_J(p, zz, s0, tol, ok, s)) return flip ? std::conj(s) : s;

  // Continuation fallback: walk z from a far point where the linear guess
  // is reliable; the straight path stays in the open upper half plane.
  Complex s_far(p.s_b + 3.0, 3.0);
  Complex z_far = eval_J(p, s_far);
  Complex cur = s_far;
  const int steps = 32;
  for (int i = 1; i <= steps; ++i) {
    Complex zt = z_far + (zz - z_far) * (double(i) / steps);
    if (!newton_J(p, zt, cur, tol, ok, cur))
      fail("convergence-error", "invert_I1: Newton continuation failed");
  }
  return flip ? std::conj(cur) : cur;
}

namespace {

// Minimum of |J(s) - z| over a coarse sample of D in the half plane of
// interest; seeds the Newton iteration when no asymptotic guess applies.
Complex grid_seed_I2(const MapParams& p, Complex z, int im_sign) {
  Complex best(0.0, im_sign * 0.5 * gamma_height(p, 0.0));
  double best_r = 1e300;
  const int nu = 48, nw = 16;
  for (int i = 1; i < nu; ++i) {
    double u = p.s_a + (p.s_b - p.s_a) * i / nu;
    double v = gamma_height(p, u);
    for (int j = 1; j < nw; ++j) {
      double w = v * j / nw;
      Complex s(u, im_sign * w);
      if (on_log_cut(s)) continue;
      double r = std::abs(eval_J(p, s) - z);
      if (r < best_r) {
        best_r = r;
        best = s;
      }
    }
  }
  return best;
}

}  // namespace

Complex invert_I2(const MapParams& p, Complex z, double tol) {
  if (std::abs(z.imag()) >= kPi)
    fail("domain-error", "invert_I2: z outside the strip |Im z| < pi");
  if (z.imag() == 0.0) {
    double x = z.real();
    if (x >= p.a && x <= p.b)
      fail("domain-error", "invert_I2: z lies on the support [a, b]");
    if (x > p.b) {
      // J decreases from +inf to b on (1/2, s_b).
      double eps = std::min(0.25 * (p.s_b - 0.5),
                            0.5 * std::exp(p.c1 / 2 + p.c0 - x));
      while (p.c1 * (0.5 + eps) + p.c0 - std::log(eps / (1.0 + eps)) < x) eps *= 0.5;
      double s = find_root(
          [&](double t) { return p.c1 * t + p.c0 - std::log((t - 0.5) / (t + 0.5)) - x; },
          0.5 + eps, p.s_b, 1e-15);
      return Complex(s, 0.0);
    }
    // J decreases from a to -inf on (s_a, -1/2).
    double eps = std::min(0.25 * (p.s_b - 0.5),
                          0.5 * std::exp(x - p.c0 + p.c1 / 2));
    while (p.c1 * (-0.5 - eps) + p.c0 + std::log(eps / (1.0 + eps)) > x) eps *= 0.5;
    double s = find_root(
        [&](double t) { return p.c1 * t + p.c0 - std::log((t - 0.5) / (t + 0.5)) - x; },
        p.s_a, -0.5 - eps, 1e-15);
    return Complex(s, 0.0);
  }

  // Im z > 0 maps into D in the lower half plane and vice versa.
  bool flip = z.imag() < 0.0;
  Complex zz = flip ? std::conj(z) : z;
  auto ok = [&](Complex s) {
    return s.imag() < 0.0 && in_domain_D(p, s);
  };

  std::vector<Complex> starts;
  if (zz.real() > p.b + 2.0)
    starts.push_back(0.5 + std::exp(p.c1 / 2 + p.c0) * std::exp(-zz));
  if (zz.real() < p.a - 2.0)
    starts.push_back(-0.5 - std::exp(p.c1 / 2 - p.c0) * std::exp(zz));
  {
    double xc = std::clamp(zz.real(), p.a + 1e-3 * (p.b - p.a), p.b - 1e-3 * (p.b - p.a));
    CurvePoint cp = boundary_inverse(p, xc, Side::minus);
    starts.push_back(Complex(cp.u, 0.7 * cp.s.imag()));
    starts.push_back(Complex(cp.u, 0.98 * cp.s.imag()));
  }
  starts.push_back(grid_seed_I2(p, zz, -1));

  Complex s;
  for (const Complex& s0 : starts)
    if (newton_J(p, zz, s0, tol, ok, s)) return flip ? std::conj(s) : s;
  fail("convergence-error", "invert_I2: Newton did not converge");
}

}  // namespace eqsrc
