#include <doctest.h>

#include <cmath>
#include <random>

#include "eqsrc/errors.hpp"
#include "eqsrc/jmap.hpp"

using namespace eqsrc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("new_map: quadratic t=1 parameters") {
  MapParams p = new_map(1.0, 0.5);
  CHECK(p.s_b == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-15));
  CHECK(p.s_a == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-15));
  // independent endpoint formula (1 +- sqrt5)/2 -+ log((3 -+ sqrt5)/2)
  double s5 = std::sqrt(5.0);
  double b_ref = (1.0 + s5) / 2.0 - std::log((3.0 - s5) / 2.0);
  double a_ref = (1.0 - s5) / 2.0 - std::log((3.0 + s5) / 2.0);
  CHECK(p.b == doctest::Approx(b_ref).epsilon(1e-14));
  CHECK(p.a == doctest::Approx(a_ref).epsilon(1e-14));
  CHECK(p.b == doctest::Approx(2.5804576388691017).epsilon(1e-12));

  CHECK_THROWS_AS(new_map(-1.0, 0.0), Error);
  CHECK_THROWS_AS(new_map(0.0, 0.0), Error);
}

TEST_CASE("new_map: a + b = 2 c0 and closed-form s_b") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uc1(0.05, 20.0), uc0(-3.0, 3.0);
  for (int i = 0; i < 25; ++i) {
    MapParams p = new_map(uc1(rng), uc0(rng));
    CHECK(p.a + p.b == doctest::Approx(2.0 * p.c0).epsilon(1e-12));
  }
  MapParams p10 = new_map(10.0, 0.0);
  CHECK(p10.s_b == doctest::Approx(std::sqrt(0.35)).epsilon(1e-15));
}

TEST_CASE("eval_J: values and symmetry") {
  MapParams p = new_map(1.0, 0.5);
  CHECK(eval_J(p, Complex(p.s_b, 0.0)).real() == doctest::Approx(p.b).epsilon(1e-14));
  Complex j2 = eval_J(p, Complex(2.0, 0.0));
  CHECK(j2.real() == doctest::Approx(3.0108256237659907).epsilon(1e-14));
  CHECK(j2.imag() == 0.0);

  // Schwarz symmetry
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ur(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    Complex s(ur(rng), ur(rng));
    if (std::abs(s.imag()) < 0.05) continue;
    Complex va = eval_J(p, std::conj(s));
    Complex vb = std::conj(eval_J(p, s));
    CHECK(std::abs(va - vb) <= 1e-14 * (1.0 + std::abs(vb)));
  }
  CHECK_THROWS_AS(eval_J(p, Complex(0.25, 0.0)), Error);
}

TEST_CASE("eval_J: monotone on the outer ray, critical points flat") {
  MapParams p = new_map(1.3, -0.2);
  const double h = 1e-6;
  for (double s : {p.s_b + 0.1, p.s_b + 0.5, p.s_b + 2.0}) {
    double d = (eval_J(p, Complex(s + h, 0)).real() - eval_J(p, Complex(s - h, 0)).real()) / (2 * h);
    CHECK(d > 0.0);
    CHECK(d == doctest::Approx(eval_J_deriv(p, Complex(s, 0)).real()).epsilon(1e-6));
  }
  // J'(s_a) = J'(s_b) = 0 by finite differences
  double db = (eval_J(p, Complex(p.s_b + h, 0)).real() -
               eval_J(p, Complex(p.s_b - h, 0)).real()) / (2 * h);
  double da = (eval_J(p, Complex(p.s_a + h, 0)).real() -
               eval_J(p, Complex(p.s_a - h, 0)).real()) / (2 * h);
  CHECK(std::abs(db) < 1e-6);
  CHECK(std::abs(da) < 1e-6);
}

TEST_CASE("gamma_height: curve equation solutions") {
  MapParams p = new_map(1.0, 0.5);
  CHECK(gamma_height(p, 0.0) == doctest::Approx(0.96018887391478286).epsilon(1e-12));
  CHECK(gamma_height(p, p.s_b) == 0.0);
  CHECK(gamma_height(p, p.s_a) == 0.0);

  // back substitution: Im J(u + i v(u)) = 0
  for (double u : {-1.0, -0.5, 0.25, 0.5, 1.0, 1.1}) {
    double v = gamma_height(p, u);
    CHECK(v >= 0.0);
    CHECK(std::abs(eval_J(p, Complex(u, v)).imag()) < 1e-9);
    if (v > 0)
      CHECK(std::abs(u * u - (0.25 + v / std::tan(v) - v * v)) < 1e-10);
  }
  CHECK(gamma_height(p, 0.0) < kPi / p.c1);
  CHECK_THROWS_AS(gamma_height(p, p.s_b + 0.1), Error);
}

TEST_CASE("gamma_height: strictly below pi/c1 across c1") {
  for (double c1 : {0.1, 0.5, 2.0, 10.0}) {
    MapParams p = new_map(c1, 0.0);
    CHECK(gamma_height(p, 0.0) < kPi / c1);
    CHECK(gamma_height(p, 0.0) > 0.0);
  }
}

TEST_CASE("boundary_inverse: midpoint symmetry and endpoints") {
  MapParams p = new_map(1.0, 0.5);
  CurvePoint mid = boundary_inverse(p, p.c0, Side::plus);
  CHECK(std::abs(mid.u) < 1e-9);
  CHECK(mid.v == doctest::Approx(0.96018887391478286).epsilon(1e-9));
  CHECK(mid.s.imag() > 0.0);
  CurvePoint midm = boundary_inverse(p, p.c0, Side::minus);
  CHECK(midm.s == std::conj(mid.s));

  CurvePoint nearb = boundary_inverse(p, p.b - 1e-9, Side::plus);
  CHECK(nearb.u == doctest::Approx(p.s_b).epsilon(1e-4));
  CHECK_THROWS_AS(boundary_inverse(p, p.b + 0.1, Side::plus), Error);
}

TEST_CASE("boundary_inverse: residual and monotonicity on a 100-point grid") {
  MapParams p = new_map(0.7, -0.3);
  double prev_u = p.s_a;
  for (int i = 1; i <= 100; ++i) {
    double x = p.a + (p.b - p.a) * i / 101.0;
    CurvePoint cp = boundary_inverse(p, x, Side::plus);
    CHECK(std::abs(eval_J(p, cp.s) - Complex(x, 0.0)) <= 1e-9);
    CHECK(cp.u > prev_u);
    prev_u = cp.u;
  }
}

TEST_CASE("invert_I1: inverse of the worked example and far-field guess") {
  MapParams p = new_map(1.0, 0.5);
  Complex s = invert_I1(p, eval_J(p, Complex(2.0, 0.0)));
  CHECK(std::abs(s - Complex(2.0, 0.0)) < 1e-10);

  for (double z : {50.0, 500.0}) {
    Complex si = invert_I1(p, Complex(z, 0.0));
    CHECK(std::abs(si.real() - (z - p.c0) / p.c1) < 0.05);
  }
  CHECK_THROWS_AS(invert_I1(p, Complex(0.5 * (p.a + p.b), 0.0)), Error);
}

TEST_CASE("invert_I1: round trips outside D") {
  MapParams p = new_map(1.0, 0.5);
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> umod(p.s_b * 1.02, 10.0), uarg(0.0, 2.0 * kPi);
  int done = 0;
  for (int i = 0; done < 50 && i < 500; ++i) {
    Complex s = std::polar(umod(rng), uarg(rng));
    s = Complex(s.real(), std::clamp(s.imag(), -5.0, 5.0));
    if (in_domain_D(p, s) || std::abs(s.imag()) < 1e-3) continue;
    Complex z = eval_J(p, s);
    Complex si = invert_I1(p, z);
    CHECK(std::abs(si - s) <= 1e-10 * (1.0 + std::abs(s)));
    ++done;
  }
  CHECK(done == 50);
}

TEST_CASE("invert_I1: preserves the upper half plane") {
  MapParams p = new_map(2.0, 1.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ure(0.0, 1.0), uim(0.01, 4.0);
  for (int i = 0; i < 40; ++i) {
    Complex z(p.a - 3.0 + ure(rng) * (p.b - p.a + 6.0), uim(rng));
    Complex s = invert_I1(p, z);
    CHECK(s.imag() > 0.0);
    CHECK(!in_domain_D(p, s));
    CHECK(std::abs(eval_J(p, s) - z) <= 1e-10 * (1.0 + std::abs(z)));
  }
}

TEST_CASE("invert_I2: exponential tail expansion") {
  MapParams p = new_map(1.0, 0.5);
  Complex s = invert_I2(p, Complex(20.0, 0.0));
  double predicted = 0.5 + std::exp(0.5 * p.c1 + p.c0) * std::exp(-20.0);
  CHECK(std::abs(s - Complex(predicted, 0.0)) <= 1e-12);
  CHECK_THROWS_AS(invert_I2(p, Complex(0.0, kPi)), Error);
  CHECK_THROWS_AS(invert_I2(p, Complex(0.5 * (p.a + p.b), 0.0)), Error);
}

TEST_CASE("invert_I2: round trips inside D") {
  MapParams p = new_map(1.0, 0.5);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uu(p.s_a * 0.98, p.s_b * 0.98),
      uf(0.05, 0.95), usgn(0.0, 1.0);
  int done = 0;
  for (int i = 0; done < 50 && i < 500; ++i) {
    double u = uu(rng);
    double vmax = gamma_height(p, u);
    double v = uf(rng) * vmax * (usgn(rng) < 0.5 ? 1.0 : -1.0);
    Complex s(u, v);
    if (std::abs(v) < 1e-6) continue;
    Complex z = eval_J(p, s);
    if (std::abs(z.imag()) >= kPi) continue;
    Complex si = invert_I2(p, z);
    CHECK(std::abs(si - s) <= 1e-10 * (1.0 + std::abs(s)));
    ++done;
  }
  CHECK(done == 50);
}

TEST_CASE("invert_I2: boundary limit hits I_minus") {
  MapParams p = new_map(1.0, 0.5);
  double x = 1.2;
  CurvePoint cp = boundary_inverse(p, x, Side::minus);
  Complex s = invert_I2(p, Complex(x, 1e-7));
  CHECK(std::abs(s - cp.s) < 1e-4);
  CHECK(s.imag() < 0.0);
}

TEST_CASE("in_domain_D: membership convention") {
  MapParams p = new_map(1.0, 0.5);
  CHECK(in_domain_D(p, Complex(0.0, 0.3)));
  CHECK(in_domain_D(p, Complex(0.0, -0.3)));
  CHECK(!in_domain_D(p, Complex(2.0, 0.0)));
  CHECK(!in_domain_D(p, Complex(0.0, 1.5)));
  // points on gamma1 report false (open interior)
  double u = 0.4;
  CHECK(!in_domain_D(p, Complex(u, gamma_height(p, u))));
}
