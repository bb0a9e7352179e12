#include "eqsrc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <unordered_map>

#include "eqsrc/errors.hpp"

namespace eqsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Curve samples for a fixed c1, memoized by the angle parameter. The shape
// of gamma depends only on c1, so one table serves every c0 seen while
// solving. u and the endpoint gap s_b^2 - u^2 are formed from tau directly
// so the height stays accurate at the curve ends.
struct CurveTab {
  MapParams p;
  mutable std::unordered_map<double, std::pair<double, double>> memo;

  explicit CurveTab(double c1) : p(new_map(c1, 0.0)) {}

  double u_of(double tau) const { return -p.s_b * std::cos(tau); }

  std::pair<double, double> height_and_slope(double tau) const {
    auto it = memo.find(tau);
    if (it != memo.end()) return it->second;
    double sn = p.s_b * std::sin(tau);
    double v = gamma_height_from_gap(p, sn * sn);
    double vp = (v > 0.0) ? gamma_height_deriv(p, u_of(tau), v) : 0.0;
    auto res = std::make_pair(v, vp);
    memo.emplace(tau, res);
    return res;
  }
};

// -(1/pi) Im of the gamma1 integral of V'(J(s)) w(s), left-to-right,
// parametrized u = s_b * (-cos tau) so the endpoint slope singularity of
// the curve is absorbed by the jacobian.
double contour_integral_tab(const FieldSpec& field, const CurveTab& tab,
                            double c0, ContourWeight w, double tol) {
  const MapParams& p = tab.p;
  auto f = [&](double tau) -> Complex {
    double u = tab.u_of(tau);
    auto [v, vp] = tab.height_and_slope(tau);
    Complex s(u, v);
    double x;
    if (v > 0.0)
      x = (p.c1 * s + c0 - std::log((s - 0.5) / (s + 0.5))).real();
    else
      x = p.c1 * u + c0 - std::log((u - 0.5) / (u + 0.5));
    Complex val = field.dV(x) * Complex(1.0, vp) * (p.s_b * std::sin(tau));
    if (w == ContourWeight::pole_at_half) val /= (s - 0.5);
    return val;
  };
  Complex line = integrate_adaptive_complex(f, 0.0, kPi, tol);
  return -line.imag() / kPi;
}

double solve_c0_tab(const FieldSpec& field, const CurveTab& tab) {
  auto g = [&](double c0) {
    return contour_integral_tab(field, tab, c0, ContourWeight::pole_at_half, 1e-12) - 1.0;
  };
  // Initial center: V'(x0) = 1 characterizes the small-c1 limit of c0.
  double center = 0.0;
  {
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 60 && field.dV(lo) > 1.0; ++i) lo *= 2.0;
    for (int i = 0; i < 60 && field.dV(hi) < 1.0; ++i) hi *= 2.0;
    if (field.dV(lo) <= 1.0 && field.dV(hi) >= 1.0)
      center = find_root([&](double x) { return field.dV(x) - 1.0; }, lo, hi, 1e-10);
  }
  double width = 1.0 + std::abs(center);
  double lo = center - width, hi = center + width;
  double glo = g(lo), ghi = g(hi);
  for (int i = 0; i < 60 && glo * ghi > 0.0; ++i) {
    width *= 2.0;
    lo = center - width;
    hi = center + width;
    glo = g(lo);
    ghi = g(hi);
  }
  if (glo * ghi > 0.0)
    fail("convergence-error", "solve_c0: bracket expansion failed after 60 doublings");
  return find_root(g, lo, hi, 1e-13 * std::max(1.0, std::abs(center) + width));
}

}  // namespace

double contour_integral_Vprime(const FieldSpec& field, double c1, double c0,
                               ContourWeight w, double tol) {
  if (!(c1 > 0.0)) fail("invalid-argument", "contour_integral_Vprime: c1 must be positive");
  CurveTab tab(c1);
  return contour_integral_tab(field, tab, c0, w, tol);
}

double solve_c0(const FieldSpec& field, double c1) {
  if (!(c1 > 0.0)) fail("invalid-argument", "solve_c0: c1 must be positive");
  CurveTab tab(c1);
  return solve_c0_tab(field, tab);
}

MapParams solve_parameters(const FieldSpec& field) {
  auto G = [&](double logc1) {
    double c1 = std::exp(logc1);
    CurveTab tab(c1);
    double c0 = solve_c0_tab(field, tab);
    return contour_integral_tab(field, tab, c0, ContourWeight::one, 1e-12) - 1.0 / c1;
  };
  double lo = std::log(1e-3), hi = std::log(1e3);
  double glo = G(lo), ghi = G(hi);
  for (int i = 0; i < 3 && glo * ghi > 0.0; ++i) {
    lo += std::log(1e-2);
    hi += std::log(1e2);
    glo = G(lo);
    ghi = G(hi);
  }
  if (glo * ghi > 0.0)
    fail("no-solution-error",
         "solve_parameters: no sign change in expanded c1 bracket; field "
         "outside the validated class");
  double logc1 = find_root(G, lo, hi, 1e-12);
  // Uniqueness is not guaranteed by the parameter equations alone; report
  // extra sign changes so the caller can tell something is off.
  {
    int changes = 0;
    double prev = glo;
    for (int i = 1; i <= 16; ++i) {
      double cur = (i == 16) ? ghi : G(lo + (hi - lo) * i / 16.0);
      if (prev * cur < 0.0) ++changes;
      prev = cur;
    }
    if (changes > 1)
      std::cerr << "solve_parameters: warning: multiple sign changes in the c1 "
                   "bracket; returning the first root found\n";
  }
  double c1 = std::exp(logc1);
  double c0 = solve_c0(field, c1);
  return new_map(c1, c0);
}

double energy(const FieldSpec& field, const std::vector<Atom>& atoms) {
  if (atoms.size() < 2)
    fail("invalid-argument", "energy: need at least two atoms (diagonal is excluded)");
  double mass = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.mass > 0.0)) fail("invalid-argument", "energy: masses must be positive");
    mass += a.mass;
  }
  if (std::abs(mass - 1.0) > 1e-10)
    fail("invalid-argument", "energy: masses must sum to 1");
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      double dx = atoms[i].x - atoms[j].x;
      if (dx == 0.0) fail("invalid-argument", "energy: coincident atoms");
      double dexp = std::exp(atoms[i].x) - std::exp(atoms[j].x);
      e -= atoms[i].mass * atoms[j].mass * (std::log(std::abs(dx)) + std::log(std::abs(dexp)));
    }
    e += atoms[i].mass * field.V(atoms[i].x);
  }
  return e;
}

// ---------------------------------------------------------------------------
// EquilibriumData
// ---------------------------------------------------------------------------

namespace {

// log|(e^x - e^t)/(x - t)| evaluated without cancellation.
double log_exp_ratio(double x, double t) {
  double h = 0.5 * (x - t);
  double ah = std::abs(h);
  double lr;  // log(sinh(ah)/ah)
  if (ah < 1e-3) {
    double h2 = ah * ah;
    lr = std::log1p(h2 / 6.0 + h2 * h2 / 120.0);
  } else {
    lr = std::log(std::sinh(ah) / ah);
  }
  return 0.5 * (x + t) + lr;
}

}  // namespace

double EquilibriumData::x_of_theta(double theta) const {
  double mid = 0.5 * (map_.a + map_.b), rad = 0.5 * (map_.b - map_.a);
  return mid - rad * std::cos(theta);
}

double EquilibriumData::theta_of_x(double x) const {
  double mid = 0.5 * (map_.a + map_.b), rad = 0.5 * (map_.b - map_.a);
  double c = std::clamp((mid - x) / rad, -1.0, 1.0);
  return std::acos(c);
}

Complex EquilibriumData::curve_point(double theta) const {
  return Complex(curve_u_(theta), curve_v_(theta));
}

Complex EquilibriumData::curve_deriv(double theta) const {
  return Complex(curve_u_.deriv(theta), curve_v_.deriv(theta));
}

void EquilibriumData::build_grids(const Options& opts) {
  int n = std::max(opts.grid_points, 121);
  if (n % 2 == 0) ++n;
  tol_ = opts.tol;
  thetas_.resize(n);
  xs_.resize(n);
  psis_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    thetas_[i] = kPi * i / (n - 1);
    xs_[i] = x_of_theta(thetas_[i]);
  }
  xs_[0] = map_.a;
  xs_[n - 1] = map_.b;

  // gamma1 coordinates at the theta knots. The curve is swept by Newton in
  // u continued from the previous knot; J(u + i v(u)) is monotone in u.
  std::vector<double> us(n), vs(n);
  us[0] = map_.s_a;
  vs[0] = 0.0;
  us[n - 1] = map_.s_b;
  vs[n - 1] = 0.0;
  double u = map_.s_a;
  for (int i = 1; i < n - 1; ++i) {
    double x = xs_[i];
    // Newton on X(u) = Re J(u + i v(u)) with bisection fallback.
    double lo = u, hi = map_.s_b;
    double ucur = std::min(std::max(u + 1e-3, lo), hi);
    for (int it = 0; it < 60; ++it) {
      double v = gamma_height(map_, ucur);
      Complex s(ucur, v);
      double X = (v > 0.0)
                     ? (map_.c1 * s + map_.c0 - std::log((s - 0.5) / (s + 0.5))).real()
                     : (ucur >= 0 ? map_.b : map_.a);
      double err = X - x;
      if (err > 0)
        hi = ucur;
      else
        lo = ucur;
      if (std::abs(err) < 1e-13 * (1.0 + std::abs(x))) break;
      double slope = (v > 0.0)
                         ? (eval_J_deriv(map_, s) * Complex(1.0, gamma_height_deriv(map_, ucur, v)))
                               .real()
                         : 1.0;
      double step = (slope != 0.0 && std::isfinite(slope)) ? err / slope : 0.0;
      double unext = ucur - step;
      if (!(unext > lo && unext < hi)) unext = 0.5 * (lo + hi);
      ucur = unext;
    }
    us[i] = ucur;
    vs[i] = gamma_height(map_, ucur);
    u = ucur;
  }
  curve_u_ = CubicSpline(thetas_, us);
  curve_v_ = CubicSpline(thetas_, vs);

  // Density samples by the V'' log-ratio integral; endpoints vanish.
  par::parallel_for(
      static_cast<std::size_t>(n - 2),
      [&](std::size_t idx) { psis_[idx + 1] = density_exact(xs_[idx + 1]); }, opts.mode);
  psi_spline_ = CubicSpline(thetas_, psis_);

  ell_ = 2.0 * log_kernel_integral(map_.b) + exp_kernel_smooth(map_.b) - field_.V(map_.b);
  ell_a_ = 2.0 * log_kernel_integral(map_.a) + exp_kernel_smooth(map_.a) - field_.V(map_.a);
  if (std::abs(ell_ - ell_a_) > 1e-6)
    fail("regularity-error",
         "compute_ell: a-side and b-side values disagree beyond 1e-6");
}

EquilibriumData EquilibriumData::build(const FieldSpec& field, const Options& opts) {
  EquilibriumData eq;
  eq.field_ = field;
  eq.map_ = solve_parameters(field);
  eq.build_grids(opts);
  return eq;
}

EquilibriumData EquilibriumData::build_with_map(const FieldSpec& field,
                                                const MapParams& map,
                                                const Options& opts) {
  EquilibriumData eq;
  eq.field_ = field;
  eq.map_ = map;
  eq.build_grids(opts);
  return eq;
}

double EquilibriumData::theta_integral(const std::function<double(double)>& f,
                                       double tol) const {
  return integrate_adaptive(f, 0.0, kPi, tol);
}

double EquilibriumData::density(double x) const {
  if (x <= map_.a || x >= map_.b) return 0.0;
  return psi_spline_(theta_of_x(x));
}

double EquilibriumData::density_exact(double x) const {
  if (!(x > map_.a && x < map_.b))
    fail("domain-error", "density_psi: x outside (a, b)");
  const double rad = 0.5 * (map_.b - map_.a);
  const double theta_x = theta_of_x(x);
  const Complex ip = curve_point(theta_x);
  const Complex im = std::conj(ip);

  // psi = (1/2 pi^2) [ T1 - T2 - C ] with
  //   T1 = int V'' log|I+(u) - I-(x)| du          (smooth),
  //   T2 = int V'' log|(I+(u) - I+(x))/(u - x)| du (smooth after the split),
  //   C  = int V'' log|u - x| du                   (closed form by parts).
  auto t1_integrand = [&](double th) {
    double uu = x_of_theta(th);
    return field_.d2V(uu) * std::log(std::abs(curve_point(th) - im)) * rad * std::sin(th);
  };
  auto t2_integrand = [&](double th) {
    double uu = x_of_theta(th);
    Complex num = curve_point(th) - ip;
    double du = uu - x;
    double lr;
    if (std::abs(du) < 1e-13 * rad) {
      // limit log|dI/du| at the diagonal
      lr = std::log(std::abs(curve_deriv(th)) / (rad * std::sin(th)));
    } else {
      lr = std::log(std::abs(num) / std::abs(du));
    }
    return field_.d2V(uu) * lr * rad * std::sin(th);
  };
  double tol = tol_;
  double T1 = integrate_adaptive(t1_integrand, 0.0, kPi, tol);
  double T2 = integrate_adaptive(t2_integrand, 0.0, theta_x, tol) +
              integrate_adaptive(t2_integrand, theta_x, kPi, tol);

  // C by parts: V'(b) log(b-x) - V'(a) log(x-a) - PV int V'(u)/(u-x) du.
  double C = field_.dV(map_.b) * std::log(map_.b - x) -
             field_.dV(map_.a) * std::log(x - map_.a) -
             field_.dV(x) * std::log((map_.b - x) / (x - map_.a));
  {
    // int (V'(u) - V'(x))/(u - x) du, polynomial in u.
    std::vector<double> c = field_.dV_coeffs();
    double acc = 0.0;
    for (std::size_t m = 1; m < c.size(); ++m) {
      if (c[m] == 0.0) continue;
      double xp = 1.0;  // x^{m-1-r}
      for (std::size_t r = m; r-- > 0;) {
        // term u^r x^{m-1-r}: integral (b^{r+1} - a^{r+1})/(r+1)
        acc += c[m] * xp *
               (std::pow(map_.b, double(r + 1)) - std::pow(map_.a, double(r + 1))) /
               double(r + 1);
        xp *= x;
      }
    }
    C -= acc;
  }
  return (T1 - T2 - C) / (2.0 * kPi * kPi);
}

double EquilibriumData::density_via_M(double x) const {
  if (!(x > map_.a && x < map_.b))
    fail("domain-error", "density_via_M: x outside (a, b)");
  const double theta_x = theta_of_x(x);
  const double U0 = field_.dV(x);

  auto pv_at = [&](Complex s0, bool singular_on_gamma1) -> Complex {
    auto leg1 = [&](double th) -> Complex {  // gamma1 left-to-right
      double uu = x_of_theta(th);
      return (field_.dV(uu) - U0) * curve_deriv(th) / (curve_point(th) - s0);
    };
    auto leg2 = [&](double th) -> Complex {  // gamma2 left-to-right
      double uu = x_of_theta(th);
      return (field_.dV(uu) - U0) * std::conj(curve_deriv(th)) /
             (std::conj(curve_point(th)) - s0);
    };
    Complex i1, i2;
    if (singular_on_gamma1) {
      i1 = integrate_adaptive_complex(leg1, 0.0, theta_x, tol_) +
           integrate_adaptive_complex(leg1, theta_x, kPi, tol_);
      i2 = integrate_adaptive_complex(leg2, 0.0, kPi, tol_);
    } else {
      i1 = integrate_adaptive_complex(leg1, 0.0, kPi, tol_);
      i2 = integrate_adaptive_complex(leg2, 0.0, theta_x, tol_) +
           integrate_adaptive_complex(leg2, theta_x, kPi, tol_);
    }
    Complex contour = i2 - i1;  // counterclockwise
    return contour / Complex(0.0, 2.0 * kPi) + U0 / 2.0;
  };

  Complex ip = curve_point(theta_x);
  Complex pv_plus = pv_at(ip, true);
  Complex pv_minus = pv_at(std::conj(ip), false);
  return ((pv_plus - pv_minus) / Complex(0.0, 2.0 * kPi)).real();
}

double EquilibriumData::mass_to_b(double x) const {
  if (x <= map_.a) return 1.0;
  if (x >= map_.b) return 0.0;
  double rad = 0.5 * (map_.b - map_.a);
  double tx = theta_of_x(x);
  return integrate_adaptive(
      [&](double th) { return psi_spline_(th) * rad * std::sin(th); }, tx, kPi, tol_);
}

double EquilibriumData::mass_from_a(double x) const {
  if (x <= map_.a) return 0.0;
  if (x >= map_.b) return 1.0;
  double rad = 0.5 * (map_.b - map_.a);
  double tx = theta_of_x(x);
  return integrate_adaptive(
      [&](double th) { return psi_spline_(th) * rad * std::sin(th); }, 0.0, tx, tol_);
}

double EquilibriumData::log_kernel_integral(double x) const {
  const double a = map_.a, b = map_.b;
  const double rad = 0.5 * (b - a);
  auto raw = [&](double th) {
    double t = x_of_theta(th);
    return psi_spline_(th) * std::log(std::abs(x - t)) * rad * std::sin(th);
  };
  if (x < a - 1e-9 * rad || x > b + 1e-9 * rad)
    return theta_integral(raw, tol_);

  double xc = std::clamp(x, a, b);
  double edge_dist = std::min(xc - a, b - xc);
  if (edge_dist < 1e-9 * rad) {
    // Endpoint: psi vanishes like a square root, integrand is mild.
    return theta_integral(raw, tol_);
  }
  // Interior: second-order singularity subtraction.
  double tx = theta_of_x(xc);
  double psix = psi_spline_(tx);
  double dpsix = psi_spline_.deriv(tx) / (rad * std::sin(tx));
  auto reg = [&](double th) {
    double t = x_of_theta(th);
    double d = t - xc;
    double w = psi_spline_(th) - psix - dpsix * d;
    double lg = (d == 0.0) ? 0.0 : std::log(std::abs(d));
    return w * lg * rad * std::sin(th);
  };
  double I = integrate_adaptive(reg, 0.0, tx, tol_) + integrate_adaptive(reg, tx, kPi, tol_);
  double da = xc - a, db = b - xc;
  double L0 = da * std::log(da) + db * std::log(db) - (b - a);
  double L1 = (db * db * (2.0 * std::log(db) - 1.0) - da * da * (2.0 * std::log(da) - 1.0)) / 4.0;
  return I + psix * L0 + dpsix * L1;
}

double EquilibriumData::exp_kernel_smooth(double x) const {
  const double rad = 0.5 * (map_.b - map_.a);
  return theta_integral(
      [&](double th) {
        double t = x_of_theta(th);
        return psi_spline_(th) * log_exp_ratio(x, t) * rad * std::sin(th);
      },
      tol_);
}

Complex EquilibriumData::eval_g(Complex z, GFun which) const {
  const double rad = 0.5 * (map_.b - map_.a);
  if (which == GFun::g) {
    if (z.imag() == 0.0 && z.real() <= map_.b)
      fail("domain-error", "eval_g: z on the logarithm cut; use the side flag");
    return integrate_adaptive_complex(
        [&](double th) {
          double t = x_of_theta(th);
          return std::log(z - t) * psi_spline_(th) * rad * std::sin(th);
        },
        0.0, kPi, tol_);
  }
  if (std::abs(z.imag()) >= kPi)
    fail("domain-error", "eval_g: g_tilde needs |Im z| < pi");
  if (z.imag() == 0.0 && z.real() <= map_.b)
    fail("domain-error", "eval_g: z on the logarithm cut; use the side flag");
  return integrate_adaptive_complex(
      [&](double th) {
        double t = x_of_theta(th);
        // log(e^z - e^t) = t + log(e^{z-t} - 1), overflow-safe for large Re z
        Complex zt = z - t;
        Complex lg;
        if (zt.real() > 30.0)
          lg = z + std::log(1.0 - std::exp(-zt));
        else
          lg = t + std::log(std::exp(zt) - 1.0);
        return lg * psi_spline_(th) * rad * std::sin(th);
      },
      0.0, kPi, tol_);
}

Complex EquilibriumData::eval_g_side(double x, GFun which, int side) const {
  double re = log_kernel_integral(x);
  if (which == GFun::g_tilde) re += exp_kernel_smooth(x);
  double m = mass_to_b(x);
  return Complex(re, side >= 0 ? kPi * m : -kPi * m);
}

Complex EquilibriumData::eval_phi(Complex z) const {
  if (z.imag() == 0.0 && z.real() <= map_.b)
    fail("domain-error", "eval_phi: z on (-inf, b]; use eval_phi_side");
  if (z.imag() == 0.0)
    return Complex(variational_lhs(z.real()), 0.0);
  return eval_g(z, GFun::g) + eval_g(z, GFun::g_tilde) - field_.V(z) - ell_;
}

Complex EquilibriumData::eval_phi_side(double x, int side) const {
  return eval_g_side(x, GFun::g, side) + eval_g_side(x, GFun::g_tilde, side) -
         field_.V(x) - ell_;
}

double EquilibriumData::variational_lhs(double x) const {
  return 2.0 * log_kernel_integral(x) + exp_kernel_smooth(x) - field_.V(x) - ell_;
}

Complex EquilibriumData::eval_f_edge(Complex z, Edge edge) const {
  const double a = map_.a, b = map_.b;
  const double edge_x = (edge == Edge::b) ? b : a;
  if (std::abs(z - edge_x) > 0.25 * (b - a))
    fail("domain-error", "eval_f_edge: z outside the edge neighborhood");
  if (z.imag() == 0.0) {
    double x = z.real();
    if (edge == Edge::b) {
      if (x >= b) {
        double q = -0.75 * variational_lhs(x);  // phi(x) < 0 out there
        return Complex(q <= 0.0 ? 0.0 : std::pow(q, 2.0 / 3.0), 0.0);
      }
      double m = mass_to_b(x);
      return Complex(-std::pow(1.5 * kPi * m, 2.0 / 3.0), 0.0);
    }
    if (x <= a) {
      double q = -0.75 * variational_lhs(x);
      return Complex(q <= 0.0 ? 0.0 : std::pow(q, 2.0 / 3.0), 0.0);
    }
    double m = mass_from_a(x);
    return Complex(-std::pow(1.5 * kPi * m, 2.0 / 3.0), 0.0);
  }
  if (z.imag() < 0.0) return std::conj(eval_f_edge(std::conj(z), edge));

  Complex phi = eval_phi(z);
  if (edge == Edge::b) {
    Complex q = -0.75 * phi;
    double p = std::arg(q);
    // continued argument runs over [0, 3pi/2) in the closed upper half disk
    if (p < -1e-9) p += 2.0 * kPi;
    return std::polar(std::pow(std::abs(q), 2.0 / 3.0), 2.0 / 3.0 * p);
  }
  Complex q = -0.75 * phi + Complex(0.0, 1.5 * kPi);
  double p = std::arg(q);
  // continued argument runs over (-3pi/2, 0] in the closed upper half disk
  if (p > 0.5 * kPi - 1e-9) p -= 2.0 * kPi;
  return std::polar(std::pow(std::abs(q), 2.0 / 3.0), 2.0 / 3.0 * p);
}

double EquilibriumData::f_edge_slope(Edge edge) const {
  double e = (edge == Edge::b) ? map_.b : map_.a;
  auto fd = [&](double h) {
    double fp = eval_f_edge(Complex(e + h, 0.0), edge).real();
    double fm = eval_f_edge(Complex(e - h, 0.0), edge).real();
    return (fp - fm) / (2.0 * h);
  };
  double h = 1e-3 * (map_.b - map_.a);
  double d1 = fd(h), d2 = fd(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

RegularityReport EquilibriumData::check_one_cut_regular() const {
  RegularityReport r;
  const double a = map_.a, b = map_.b, rad = 0.5 * (b - a);

  double norm = theta_integral(
      [&](double th) { return psi_spline_(th) * rad * std::sin(th); }, tol_);
  r.normalization_residual = std::abs(norm - 1.0);
  r.normalization_ok = r.normalization_residual <= 1e-8;

  r.min_density = 1e300;
  for (int i = 0; i < 200; ++i) {
    double x = a + (b - a) * (i + 0.5) / 200.0;
    r.min_density = std::min(r.min_density, density(x));
  }
  r.positivity_ok = r.min_density > 0.0;

  {
    double h1 = 1e-3 * (b - a), h2 = 1e-4 * (b - a), h3 = 1e-5 * (b - a);
    double rb1 = density_exact(b - h1) / std::sqrt(h1);
    double rb2 = density_exact(b - h2) / std::sqrt(h2);
    double rb3 = density_exact(b - h3) / std::sqrt(h3);
    double ra1 = density_exact(a + h1) / std::sqrt(h1);
    double ra2 = density_exact(a + h2) / std::sqrt(h2);
    double ra3 = density_exact(a + h3) / std::sqrt(h3);
    r.edge_limit_b = rb3;
    r.edge_limit_a = ra3;
    r.edge_ok = rb1 > 0 && rb2 > 0 && rb3 > 0 && ra1 > 0 && ra2 > 0 && ra3 > 0 &&
                std::isfinite(rb3) && std::isfinite(ra3);
    double dev = 0.0;
    if (r.edge_ok) {
      dev = std::max({std::abs(rb2 / rb1 - 1.0), std::abs(rb3 / rb2 - 1.0),
                      std::abs(ra2 / ra1 - 1.0), std::abs(ra3 / ra2 - 1.0)});
    }
    r.edge_ratio_dev = dev;  // recorded, not gating: spec flags slow convergence
  }

  r.var_eq_residual = 0.0;
  for (int i = 1; i <= 100; ++i) {
    double x = a + (b - a) * i / 101.0;
    r.var_eq_residual = std::max(r.var_eq_residual, std::abs(variational_lhs(x)));
  }
  r.var_eq_ok = r.var_eq_residual <= 1e-8;

  r.var_ineq_margin = 1e300;
  for (int i = 1; i <= 10; ++i) {
    double off = 0.05 * i * (b - a);
    r.var_ineq_margin = std::min(r.var_ineq_margin, -variational_lhs(b + off));
    r.var_ineq_margin = std::min(r.var_ineq_margin, -variational_lhs(a - off));
  }
  r.var_ineq_ok = r.var_ineq_margin >= 1e-4;
  return r;
}

Complex eval_M(const EquilibriumData& eq, Complex s) {
  const MapParams& p = eq.map();
  // distance proxy to gamma via the height graph
  double d = 1e300;
  if (s.real() >= p.s_a && s.real() <= p.s_b) {
    double v = gamma_height(p, s.real());
    d = std::min(std::abs(s.imag() - v), std::abs(s.imag() + v));
  }
  d = std::min({d, std::abs(s - Complex(p.s_a, 0)), std::abs(s - Complex(p.s_b, 0))});
  if (d < 1e-8) fail("near-singular-error", "eval_M: s too close to gamma");

  auto leg1 = [&](double th) -> Complex {
    double uu = eq.x_of_theta(th);
    return eq.field().dV(uu) * eq.curve_deriv(th) / (eq.curve_point(th) - s);
  };
  auto leg2 = [&](double th) -> Complex {
    double uu = eq.x_of_theta(th);
    return eq.field().dV(uu) * std::conj(eq.curve_deriv(th)) /
           (std::conj(eq.curve_point(th)) - s);
  };
  Complex contour = integrate_adaptive_complex(leg2, 0.0, kPi, eq.tol()) -
                    integrate_adaptive_complex(leg1, 0.0, kPi, eq.tol());
  Complex val = contour / Complex(0.0, 2.0 * kPi);
  return in_domain_D(p, s) ? val : -val;
}

}  // namespace eqsrc
