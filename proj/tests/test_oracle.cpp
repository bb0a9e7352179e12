#include <doctest.h>

#include <cmath>

#include "eqsrc/errors.hpp"
#include "eqsrc/oracle.hpp"
#include "fixtures.hpp"

using namespace eqsrc;

namespace {

constexpr double kPi = 3.14159265358979323846;

const MomentTable& moments_n20() {
  static MomentTable t = compute_moments(FieldSpec::quadratic(1.0), 20, 21, 21,
                                         PrecisionContext{256});
  return t;
}

double big_err(const BigReal& got, const BigReal& expect) {
  BigReal scale = abs(expect) + BigReal(1e-300, expect.precision());
  return (abs(got - expect) / scale).to_double();
}

}  // namespace

TEST_CASE("compute_moments: Gaussian closed forms at n = 1") {
  MomentTable t = compute_moments(FieldSpec::quadratic(1.0), 1, 2, 2,
                                  PrecisionContext{256});
  // sqrt(2 pi) and the completed squares at 256 bits
  BigReal pi2(256 + 16);
  mpfr_const_pi(pi2.raw(), MPFR_RNDN);
  BigReal s2pi = sqrt(pi2 * 2.0);
  BigReal ehalf = exp(BigReal(0.5, 256 + 16));
  CHECK(big_err(t.at(0, 0), s2pi) < 1e-70);
  CHECK(big_err(t.at(0, 1), s2pi * ehalf) < 1e-70);
  CHECK(big_err(t.at(1, 1), s2pi * ehalf) < 1e-70);  // mean shifted to 1
  // m[2][0] = sqrt(2 pi) (Gaussian second moment)
  CHECK(big_err(t.at(2, 0), s2pi) < 1e-70);
  CHECK_THROWS_AS(compute_moments(FieldSpec::quadratic(1.0), 1, 9, 1,
                                  PrecisionContext{256}),
                  Error);
}

TEST_CASE("exact_p: low-degree closed forms") {
  MomentTable t = compute_moments(FieldSpec::quadratic(1.0), 1, 3, 2,
                                  PrecisionContext{256});
  ExactPoly p1 = exact_p(t, 1);
  // p_1(x) = x - m[1][0]/m[0][0] = x (odd Gaussian moment vanishes)
  CHECK(std::abs(p1.coeffs[0].to_double()) < 1e-70);
  CHECK(p1.coeffs[1].to_double() == 1.0);

  // p_2: orthogonality residuals against both weights vanish
  ExactPoly p2 = exact_p(t, 2);
  for (int k = 0; k <= 1; ++k) {
    BigReal res(0.0, 256);
    for (int i = 0; i <= 2; ++i) res += p2.coeffs[i] * t.at(i, k);
    CHECK(big_err(res + t.at(0, k), t.at(0, k)) < 1e-68);  // res ~ 0 vs scale m[0][k]
  }
}

TEST_CASE("exact_q: closed form, empty system, determinant route") {
  MomentTable t = compute_moments(FieldSpec::quadratic(1.0), 1, 2, 2,
                                  PrecisionContext{256});
  ExactPoly q0 = exact_q(t, 0);
  CHECK(q0.coeffs.size() == 1);
  CHECK(q0.coeffs[0].to_double() == 1.0);

  // (orthoI) at j=1, i=0: d0 = -m[0][1]/m[0][0] = -e^{1/2} for the unit
  // Gaussian weight
  ExactPoly q1 = exact_q(t, 1);
  BigReal expect = -t.at(0, 1) / t.at(0, 0);
  CHECK(big_err(q1.coeffs[0], expect) < 1e-70);
  CHECK(q1.coeffs[0].to_double() ==
        doctest::Approx(-std::exp(0.5)).epsilon(1e-14));

  MomentTable t6 = compute_moments(FieldSpec::quadratic(1.0), 6, 7, 7,
                                   PrecisionContext{256});
  for (int j = 1; j <= 6; ++j) {
    ExactPoly qa = exact_q(t6, j);
    ExactPoly qb = exact_q_determinant(t6, j);
    for (int i = 0; i <= j; ++i) CHECK(big_err(qa.coeffs[i], qb.coeffs[i]) < 1e-20);
  }
}

TEST_CASE("exact_h: closed forms and positivity") {
  MomentTable t1 = compute_moments(FieldSpec::quadratic(1.0), 1, 2, 2,
                                   PrecisionContext{256});
  ExactPoly p0, q0;
  p0.basis = ExactPoly::Basis::monomial_x;
  p0.degree = 0;
  p0.n = 1;
  p0.coeffs = {BigReal(1.0, 256)};
  q0 = exact_q(t1, 0);
  CHECK(big_err(exact_h(t1, p0, q0), t1.at(0, 0)) < 1e-75);

  // j = 1: expand the four-term bilinear sum by hand
  ExactPoly p1 = exact_p(t1, 1), q1 = exact_q(t1, 1);
  BigReal hand = p1.coeffs[0] * q1.coeffs[0] * t1.at(0, 0) +
                 p1.coeffs[0] * q1.coeffs[1] * t1.at(0, 1) +
                 p1.coeffs[1] * q1.coeffs[0] * t1.at(1, 0) +
                 p1.coeffs[1] * q1.coeffs[1] * t1.at(1, 1);
  CHECK(big_err(exact_h(t1, p1, q1), hand) == 0.0);

  const MomentTable& t20 = moments_n20();
  for (int j = 1; j <= 20; ++j) {
    ExactPoly p = exact_p(t20, j), q = exact_q(t20, j);
    CHECK(exact_h(t20, p, q).sign() > 0);  // observed regression property
  }
}

TEST_CASE("biorthogonality: off-diagonal pairings vanish") {
  MomentTable t = compute_moments(FieldSpec::quadratic(1.0), 5, 6, 6,
                                  PrecisionContext{256});
  std::vector<ExactPoly> ps, qs;
  for (int j = 0; j <= 5; ++j) {
    if (j == 0) {
      ExactPoly p;
      p.basis = ExactPoly::Basis::monomial_x;
      p.degree = 0;
      p.n = 5;
      p.coeffs = {BigReal(1.0, 256)};
      ps.push_back(p);
    } else {
      ps.push_back(exact_p(t, j));
    }
    qs.push_back(exact_q(t, j));
  }
  for (int j = 0; j <= 5; ++j) {
    for (int kk = 0; kk <= 5; ++kk) {
      BigReal pair(0.0, 256);
      BigReal scale(0.0, 256);
      for (int i = 0; i <= j; ++i)
        for (int l = 0; l <= kk; ++l) {
          BigReal term = ps[j].coeffs[i] * qs[kk].coeffs[l] * t.at(i, l);
          pair += term;
          scale += abs(term);
        }
      if (j == kk) {
        CHECK(pair.sign() > 0);
      } else {
        CHECK((abs(pair) / scale).to_double() < 1e-70);
      }
    }
  }
}

TEST_CASE("precision scaling: doubling bits leaves coefficients stable") {
  MomentTable t256 = compute_moments(FieldSpec::quadratic(1.0), 10, 10, 9,
                                     PrecisionContext{256});
  MomentTable t512 = compute_moments(FieldSpec::quadratic(1.0), 10, 10, 9,
                                     PrecisionContext{512});
  ExactPoly a = exact_p(t256, 10), b = exact_p(t512, 10);
  for (int i = 0; i < 10; ++i) {
    double rel = big_err(a.coeffs[i], b.coeffs[i]);
    CHECK(rel < 1e-40);  // conditioning eats some of the 77 digits, not all
  }
}

TEST_CASE("saddle_p_quadratic: agreement with the moment oracle") {
  const MomentTable& t = moments_n20();
  ExactPoly p20 = exact_p(t, 20);

  double exact_out = p20.eval(5.0);
  double sp_out = saddle_p_quadratic(5.0, 20, SaddleMode::full_sum);
  CHECK(std::abs(sp_out / exact_out - 1.0) < 0.005);

  double mid = 0.5;  // support midpoint for t = 1
  double exact_mid = p20.eval(mid);
  double sp_mid = saddle_p_quadratic(mid, 20, SaddleMode::full_sum);
  CHECK(std::abs(sp_mid / exact_mid - 1.0) < 0.02);

  CHECK_THROWS_AS(saddle_p_quadratic(fixture_quad1().map().b, 20, SaddleMode::full_sum),
                  Error);
}

TEST_CASE("saddle_p_quadratic: F' equals J - x and mode consistency") {
  // d/ds F(s;x) = J_{1,1/2}(s) - x by finite differences of the limit form
  MapParams p = new_map(1.0, 0.5);
  auto F = [](Complex s, double x) {
    return 0.5 * (s + 0.5 - x) * (s + 0.5 - x) +
           (s + 0.5) * std::log(s + 0.5) - (s - 0.5) * std::log(s - 0.5) - 1.0;
  };
  const double h = 1e-6;
  for (Complex s : {Complex(2.0, 0.3), Complex(1.2, -0.8), Complex(-1.4, 0.5)}) {
    double x = 3.1;
    Complex d = (F(s + h, x) - F(s - h, x)) / (2.0 * h);
    CHECK(std::abs(d - (eval_J(p, s) - x)) < 1e-7);
  }

  // full_sum and limit_phase agree to O(1/n): discrepancy ratio in [0.2, 1]
  double x = 5.0;
  auto rel_gap = [&](int n) {
    double a = saddle_p_quadratic(x, n, SaddleMode::full_sum);
    double b = saddle_p_quadratic(x, n, SaddleMode::limit_phase);
    return std::abs(a / b - 1.0);
  };
  double g10 = rel_gap(10), g20 = rel_gap(20), g40 = rel_gap(40);
  CHECK(g20 / g10 >= 0.2);
  CHECK(g20 / g10 <= 1.0);
  CHECK(g40 / g20 >= 0.2);
  CHECK(g40 / g20 <= 1.0);
}

TEST_CASE("real_zeros: count, support confinement, interlacing") {
  MomentTable t1 = compute_moments(FieldSpec::quadratic(1.0), 1, 2, 1,
                                   PrecisionContext{256});
  ExactPoly p1 = exact_p(t1, 1);
  std::vector<double> z1 = real_zeros(p1, -1.0, 1.0);
  REQUIRE(z1.size() == 1);
  CHECK(std::abs(z1[0]) < 1e-10);

  const EquilibriumData& eq = fixture_quad1();
  double lo = eq.map().a - 0.2, hi = eq.map().b + 0.2;
  const MomentTable& t20 = moments_n20();
  ExactPoly p20 = exact_p(t20, 20);
  std::vector<double> z20 = real_zeros(p20, lo - 2.0, hi + 2.0);
  REQUIRE(z20.size() == 20);  // all zeros real and simple (AT system)
  for (double z : z20) {
    CHECK(z > lo);
    CHECK(z < hi);
  }

  // interlacing of consecutive degrees (n = 15 table)
  MomentTable t15 = compute_moments(FieldSpec::quadratic(1.0), 15, 16, 15,
                                    PrecisionContext{256});
  std::vector<double> prev = real_zeros(exact_p(t15, 1), lo - 3, hi + 3);
  for (int j = 2; j <= 15; ++j) {
    std::vector<double> cur = real_zeros(exact_p(t15, j), lo - 3, hi + 3);
    REQUIRE(cur.size() == std::size_t(j));
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      CHECK(prev[i] > cur[i]);
      CHECK(prev[i] < cur[i + 1]);
    }
    prev = cur;
  }
}

TEST_CASE("counting_measure_distance: quantiles and a single atom") {
  const EquilibriumData& eq = fixture_quad1();
  const int n = 20;
  std::vector<double> quant(n);
  for (int i = 0; i < n; ++i) {
    double target = (i + 0.5) / n;
    quant[i] = find_root(
        [&](double x) { return eq.mass_from_a(x) - target; }, eq.map().a,
        eq.map().b, 1e-10);
  }
  CHECK(counting_measure_distance(quant, eq) <= 0.5 / n + 1e-6);

  double x0 = 0.5 * (eq.map().a + eq.map().b);
  double F0 = eq.mass_from_a(x0);
  CHECK(counting_measure_distance({x0}, eq) ==
        doctest::Approx(std::max(F0, 1.0 - F0)).epsilon(1e-12));
}
