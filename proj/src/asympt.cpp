#include "eqsrc/asympt.hpp"

#include <cmath>

#include "eqsrc/errors.hpp"

namespace eqsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Two-factor square root with cut on the real segment [s_a, s_b] and
// w2(s) ~ s at infinity.
Complex w2(const MapParams& p, Complex s) {
  return std::sqrt(s - p.s_a) * std::sqrt(s - p.s_b);
}

// Value on the open segment (s_a, s_b): the continuous limit of the
// gamma1-cut branch from below, and of the gamma2-cut branch from above.
Complex w_segment(const MapParams& p, double x, Cut cut) {
  double m = std::sqrt(p.s_b * p.s_b - x * x);
  return (cut == Cut::gamma1) ? Complex(0.0, -m) : Complex(0.0, m);
}

// Region strictly between the cut arc and the segment, where the
// arc-cut branch flips sign against w2.
bool in_flip_region(const EquilibriumData& eq, Complex s, Cut cut) {
  const MapParams& p = eq.map();
  if (!(s.real() > p.s_a && s.real() < p.s_b)) return false;
  double v = (cut == Cut::gamma1) ? s.imag() : -s.imag();
  if (v <= 0.0) return false;
  return v < gamma_height(p, s.real());
}

Complex gk_raw(const MapParams& p, int k, Complex s, Complex w) {
  return std::pow(p.c1, k) * (s + 0.5) * std::pow(s - 0.5, k) / w;
}

Complex ghatk_raw(const MapParams& p, int k, Complex s, Complex w) {
  return Complex(0.0, 1.0) * std::exp(k * (0.5 * p.c1 + p.c0)) / std::sqrt(p.c1) *
         std::pow(s - 0.5, -k) / w;
}

}  // namespace

Complex branch_sqrt(const EquilibriumData& eq, Complex s, Cut cut) {
  const MapParams& p = eq.map();
  // proximity to the cut arc (and its endpoints)
  if (s.real() >= p.s_a - 1e-10 && s.real() <= p.s_b + 1e-10) {
    double v = gamma_height(p, std::clamp(s.real(), p.s_a, p.s_b));
    double im = (cut == Cut::gamma1) ? v : -v;
    if (std::abs(s - Complex(s.real(), im)) < 1e-10)
      fail("near-cut-error", "branch_sqrt: s within 1e-10 of the cut arc");
  }
  if (s.imag() == 0.0 && s.real() > p.s_a && s.real() < p.s_b)
    return w_segment(p, s.real(), cut);
  Complex w = w2(p, s);
  return in_flip_region(eq, s, cut) ? -w : w;
}

Complex eval_Gk(const EquilibriumData& eq, int k, Complex s) {
  return gk_raw(eq.map(), k, s, branch_sqrt(eq, s, Cut::gamma1));
}

Complex eval_Ghatk(const EquilibriumData& eq, int k, Complex s) {
  if (k > 0 && std::abs(s - 0.5) < 1e-14)
    fail("domain-error", "eval_Ghatk: pole at s = 1/2 for k > 0");
  return ghatk_raw(eq.map(), k, s, branch_sqrt(eq, s, Cut::gamma2));
}

void bulk_prefactor_p(const EquilibriumData& eq, int k, double x, double& r,
                      double& theta) {
  // G_k at I_+(x), approached from outside closure(D): the w2 branch.
  Complex ip = eq.curve_point(eq.theta_of_x(x));
  Complex g = gk_raw(eq.map(), k, ip, w2(eq.map(), ip));
  r = 2.0 * std::abs(g);
  theta = std::arg(g);
}

void bulk_prefactor_q(const EquilibriumData& eq, int k, double x, double& r,
                      double& theta) {
  // Ghat_k at I_-(x), approached from inside D (above gamma2): -w2 branch.
  Complex im = std::conj(eq.curve_point(eq.theta_of_x(x)));
  Complex g = ghatk_raw(eq.map(), k, im, -w2(eq.map(), im));
  r = 2.0 * std::abs(g);
  theta = std::arg(g);
}

RegionTag classify_region(const EquilibriumData& eq, Complex z, double delta) {
  const MapParams& p = eq.map();
  if (delta <= 0.0) delta = 0.05 * (p.b - p.a);
  if (z.imag() < 0.0)
    fail("domain-error", "classify_region: needs Im z >= 0 (conjugate first)");
  RegionTag tag{Region::A, delta};
  if (std::abs(z - p.a) <= delta)
    tag.tag = Region::C;
  else if (std::abs(z - p.b) <= delta)
    tag.tag = Region::D;
  else if (z.real() > p.a && z.real() < p.b && z.imag() <= 0.5 * delta)
    tag.tag = Region::B;
  return tag;
}

namespace {

ScaledComplex scaled_sum(const ScaledComplex& x, const ScaledComplex& y) {
  ScaledComplex r;
  if (x.mantissa == Complex(0.0)) return y;
  if (y.mantissa == Complex(0.0)) return x;
  r.exponent = std::max(x.exponent, y.exponent);
  r.mantissa = x.mantissa * std::exp(x.exponent - r.exponent) +
               y.mantissa * std::exp(y.exponent - r.exponent);
  return r;
}

// Airy edge evaluation at real z in region C or D. polys = p selects the
// (G_k, g) family, otherwise (Ghat_k, gt).
ScaledComplex edge_airy_real(const EquilibriumData& eq, int n, int k, double x,
                             Edge edge, bool polys_p) {
  const MapParams& p = eq.map();
  const double n16 = std::pow(double(n), 1.0 / 6.0);

  // exponent: (n/2)(g - gt + V + ell) for p, (n/2)(gt - g + V + ell) for q;
  // both combinations are continuous and real across the support.
  double g_re, gt_re;
  {
    Complex gs = eq.eval_g_side(x, GFun::g, +1);
    Complex gts = eq.eval_g_side(x, GFun::g_tilde, +1);
    g_re = gs.real();
    gt_re = gts.real();
  }
  double expo = 0.5 * n *
                ((polys_p ? g_re - gt_re : gt_re - g_re) + eq.field().V(x) + eq.ell());

  Complex fa = eq.eval_f_edge(Complex(x, 0.0), edge);
  double f = fa.real();
  AiryPair ai = airy_ai_and_prime(std::cbrt(double(n) * double(n)) * f);

  Complex c_minus, c_plus;  // (X - iY) and (X + iY) pieces
  Complex f14, f14inv;
  bool outside_support = (edge == Edge::b) ? (x >= p.b) : (x <= p.a);
  if (outside_support) {
    Complex i1 = invert_I1(p, Complex(x, 0.0), eq.tol());
    Complex i2 = invert_I2(p, Complex(x, 0.0), eq.tol());
    Complex X, Y;
    if (polys_p) {
      X = gk_raw(p, k, i1, branch_sqrt(eq, i1, Cut::gamma1));
      Y = gk_raw(p, k, i2, branch_sqrt(eq, i2, Cut::gamma1));
    } else {
      X = ghatk_raw(p, k, i2, branch_sqrt(eq, i2, Cut::gamma2));
      Y = ghatk_raw(p, k, i1, branch_sqrt(eq, i1, Cut::gamma2));
    }
    c_minus = X - Complex(0.0, 1.0) * Y;
    c_plus = X + Complex(0.0, 1.0) * Y;
    f14 = std::pow(f, 0.25);
    f14inv = 1.0 / f14;
  } else {
    Complex ip = eq.curve_point(eq.theta_of_x(x));
    Complex X;
    if (polys_p)
      X = gk_raw(p, k, ip, w2(p, ip));
    else
      X = ghatk_raw(p, k, std::conj(ip), -w2(p, std::conj(ip)));
    Complex Y = std::conj(X);
    c_minus = X - Complex(0.0, 1.0) * Y;
    c_plus = X + Complex(0.0, 1.0) * Y;
    // One-sided quarter powers: arg f = +pi across (a,b) for the b-edge
    // continuation, and the pairing flips for the a-edge (see notes in the
    // edge tests: both choices are fixed by reality of the polynomials).
    double m14 = std::pow(-f, 0.25);
    f14 = m14 * std::polar(1.0, kPi / 4.0);
    f14inv = (1.0 / m14) * std::polar(1.0, -kPi / 4.0);
  }

  ScaledComplex out;
  out.exponent = expo;
  out.mantissa = std::sqrt(kPi) * (c_minus * n16 * f14 * ai.ai -
                                   c_plus / n16 * f14inv * ai.ai_prime);
  // Real polynomials at real arguments: drop the numerical phase residue.
  out.mantissa = Complex(out.mantissa.real(), 0.0);
  return out;
}

}  // namespace

AsymptoticResult asym_p(const EquilibriumData& eq, int n, int k, Complex z,
                        double delta) {
  if (n < 1) fail("invalid-argument", "asym_p: n must be positive");
  if (z.imag() < 0.0) {
    AsymptoticResult r = asym_p(eq, n, k, std::conj(z), delta);
    r.value.mantissa = std::conj(r.value.mantissa);
    return r;
  }
  const MapParams& p = eq.map();
  RegionTag tag = classify_region(eq, z, delta);
  AsymptoticResult res;
  res.region = tag;
  res.n = n;
  res.k = k;

  switch (tag.tag) {
    case Region::A: {
      Complex g = eq.eval_g(z, GFun::g);
      Complex i1 = invert_I1(p, z, eq.tol());
      res.form = AsymForm::outside;
      res.value.exponent = double(n) * g.real();
      res.value.mantissa = eval_Gk(eq, k, i1) * std::polar(1.0, double(n) * g.imag());
      return res;
    }
    case Region::B: {
      res.form = AsymForm::bulk;
      if (z.imag() == 0.0) {
        double x = z.real();
        double r, th;
        bulk_prefactor_p(eq, k, x, r, th);
        double m = eq.mass_to_b(x);
        res.value.exponent = double(n) * eq.eval_g_side(x, GFun::g, +1).real();
        res.value.mantissa = r * std::cos(double(n) * kPi * m + th);
        return res;
      }
      Complex g = eq.eval_g(z, GFun::g);
      Complex gt = eq.eval_g(z, GFun::g_tilde);
      Complex i1 = invert_I1(p, z, eq.tol());
      Complex i2 = invert_I2(p, z, eq.tol());
      ScaledComplex t1, t2;
      t1.exponent = double(n) * g.real();
      t1.mantissa = eval_Gk(eq, k, i1) * std::polar(1.0, double(n) * g.imag());
      Complex e2 = eq.field().V(z) - gt + eq.ell();
      t2.exponent = double(n) * e2.real();
      t2.mantissa = eval_Gk(eq, k, i2) * std::polar(1.0, double(n) * e2.imag());
      res.value = scaled_sum(t1, t2);
      return res;
    }
    case Region::C:
    case Region::D: {
      if (z.imag() != 0.0)
        fail("domain-error",
             "asym_p: complex-argument Airy in the edge regions is out of scope");
      res.form = AsymForm::edge_airy;
      res.value = edge_airy_real(eq, n, k, z.real(),
                                 tag.tag == Region::C ? Edge::a : Edge::b, true);
      return res;
    }
  }
  fail("domain-error", "asym_p: unreachable region");
}

AsymptoticResult asym_q(const EquilibriumData& eq, int n, int k, Complex z,
                        double delta) {
  if (n < 1) fail("invalid-argument", "asym_q: n must be positive");
  if (std::abs(z.imag()) >= kPi)
    fail("domain-error", "asym_q: needs |Im z| < pi");
  if (z.imag() < 0.0) {
    AsymptoticResult r = asym_q(eq, n, k, std::conj(z), delta);
    r.value.mantissa = std::conj(r.value.mantissa);
    return r;
  }
  const MapParams& p = eq.map();
  RegionTag tag = classify_region(eq, z, delta);
  AsymptoticResult res;
  res.region = tag;
  res.n = n;
  res.k = k;

  switch (tag.tag) {
    case Region::A: {
      Complex gt = eq.eval_g(z, GFun::g_tilde);
      Complex i2 = invert_I2(p, z, eq.tol());
      res.form = AsymForm::outside;
      res.value.exponent = double(n) * gt.real();
      res.value.mantissa = eval_Ghatk(eq, k, i2) * std::polar(1.0, double(n) * gt.imag());
      return res;
    }
    case Region::B: {
      res.form = AsymForm::bulk;
      if (z.imag() == 0.0) {
        double x = z.real();
        double r, th;
        bulk_prefactor_q(eq, k, x, r, th);
        double m = eq.mass_to_b(x);
        res.value.exponent = double(n) * eq.eval_g_side(x, GFun::g_tilde, +1).real();
        res.value.mantissa = r * std::cos(double(n) * kPi * m + th);
        return res;
      }
      Complex g = eq.eval_g(z, GFun::g);
      Complex gt = eq.eval_g(z, GFun::g_tilde);
      Complex i1 = invert_I1(p, z, eq.tol());
      Complex i2 = invert_I2(p, z, eq.tol());
      ScaledComplex t1, t2;
      t1.exponent = double(n) * gt.real();
      t1.mantissa = eval_Ghatk(eq, k, i2) * std::polar(1.0, double(n) * gt.imag());
      Complex e2 = eq.field().V(z) - g + eq.ell();
      t2.exponent = double(n) * e2.real();
      t2.mantissa = eval_Ghatk(eq, k, i1) * std::polar(1.0, double(n) * e2.imag());
      res.value = scaled_sum(t1, t2);
      return res;
    }
    case Region::C:
    case Region::D: {
      if (z.imag() != 0.0)
        fail("domain-error",
             "asym_q: complex-argument Airy in the edge regions is out of scope");
      res.form = AsymForm::edge_airy;
      res.value = edge_airy_real(eq, n, k, z.real(),
                                 tag.tag == Region::C ? Edge::a : Edge::b, false);
      return res;
    }
  }
  fail("domain-error", "asym_q: unreachable region");
}

ScaledReal asym_h(const EquilibriumData& eq, int n, int k) {
  if (n < 1) fail("invalid-argument", "asym_h: n must be positive");
  const MapParams& p = eq.map();
  ScaledReal r;
  r.mantissa = 2.0 * kPi * std::pow(p.c1, k + 0.5) * std::exp(k * (0.5 * p.c1 + p.c0));
  r.exponent = double(n) * eq.ell();
  return r;
}

double edge_scaled_p(const EquilibriumData& eq, int n, int k, double t, Edge edge) {
  const MapParams& p = eq.map();
  double sb2 = 0.25 + 1.0 / p.c1;  // s_b^2
  double sb = std::sqrt(sb2);
  double n16 = std::pow(double(n), 1.0 / 6.0);
  AiryPair ai = airy_ai_and_prime(t);
  if (edge == Edge::b) {
    double slope = eq.f_edge_slope(Edge::b);
    return std::sqrt(2.0 * kPi) * std::pow(sb2, -0.125) * std::pow(sb - 0.5, k - 1) *
           std::pow(p.c1, k - 0.5) * std::pow(slope, 0.25) * n16 * ai.ai;
  }
  double slope = eq.f_edge_slope(Edge::a);  // negative
  double sgn = (k % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::sqrt(2.0 * kPi) * std::pow(sb2, -0.125) * std::pow(sb + 0.5, k - 1) *
         std::pow(p.c1, k - 0.5) * std::pow(-slope, 0.25) * n16 * ai.ai;
}

double edge_scaled_q(const EquilibriumData& eq, int n, int k, double t, Edge edge) {
  const MapParams& p = eq.map();
  double sb2 = 0.25 + 1.0 / p.c1;
  double sb = std::sqrt(sb2);
  double n16 = std::pow(double(n), 1.0 / 6.0);
  AiryPair ai = airy_ai_and_prime(t);
  double ek = std::exp(k * (0.5 * p.c1 + p.c0));
  if (edge == Edge::b) {
    double slope = eq.f_edge_slope(Edge::b);
    return std::sqrt(2.0 * kPi) * std::pow(sb2, -0.125) * std::pow(sb - 0.5, -k) * ek *
           std::pow(slope, 0.25) * n16 * ai.ai;
  }
  double slope = eq.f_edge_slope(Edge::a);
  double sgn = (k % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::sqrt(2.0 * kPi) * std::pow(sb2, -0.125) * std::pow(sb + 0.5, -k) * ek *
         std::pow(-slope, 0.25) * n16 * ai.ai;
}

}  // namespace eqsrc
