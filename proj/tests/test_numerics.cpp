#include <doctest.h>

#include <cmath>

#include "eqsrc/bigreal.hpp"
#include "eqsrc/errors.hpp"
#include "eqsrc/numerics.hpp"

using namespace eqsrc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gauss_legendre: closed-form low orders") {
  QuadratureRule r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  QuadratureRule r3 = gauss_legendre(3);
  CHECK(r3.nodes[1] == 0.0);
  CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));

  CHECK_THROWS_AS(gauss_legendre(1), Error);
}

TEST_CASE("gauss_legendre: structure invariants") {
  for (int order : {2, 5, 16, 64, 101}) {
    QuadratureRule r = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(std::abs(wsum - 2.0) < 1e-14);
    for (int i = 1; i < order; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (int i = 0; i < order; ++i)
      CHECK(std::abs(r.nodes[i] + r.nodes[order - 1 - i]) < 1e-15);
  }
}

TEST_CASE("gauss_legendre: order 64 integrates x^10 exactly") {
  QuadratureRule r = gauss_legendre(64);
  double acc = 0.0;
  for (int i = 0; i < 64; ++i) acc += r.weights[i] * std::pow(r.nodes[i], 10);
  CHECK(std::abs(acc - 2.0 / 11.0) < 1e-14);
}

TEST_CASE("gauss_legendre: degree 2*order-1 exactness") {
  // oracle: exact monomial integrals int_{-1}^{1} x^m = 2/(m+1) for even m
  for (int order : {4, 9, 20}) {
    QuadratureRule r = gauss_legendre(order);
    for (int m = 0; m <= 2 * order - 1; ++m) {
      double acc = 0.0;
      for (int i = 0; i < order; ++i) acc += r.weights[i] * std::pow(r.nodes[i], m);
      double exact = (m % 2 == 0) ? 2.0 / (m + 1) : 0.0;
      CHECK(std::abs(acc - exact) < 1e-13);
    }
  }
}

TEST_CASE("find_root: sqrt(2)") {
  double r = find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  CHECK(r == doctest::Approx(1.41421356237309505).epsilon(1e-12));
}

TEST_CASE("find_root: curve equation at u = 0, c1 = 1") {
  // oracle: bisection residual of 1/4 + v cot v - v^2 vanishes at the root
  double r = find_root(
      [](double v) { return 0.25 + v / std::tan(v) - v * v; }, 0.5, 1.5, 1e-12);
  CHECK(r == doctest::Approx(0.96018887391478286).epsilon(1e-10));
}

TEST_CASE("find_root: quartic cubic at u = 0") {
  double r = find_root(
      [](double c) { return c * c * c + 12.0 * c * c - 4.0; }, 0.1, 1.0, 1e-12);
  CHECK(r == doctest::Approx(0.56423747518569742).epsilon(1e-10));
}

TEST_CASE("find_root: stays inside the bracket and flags errors") {
  double lo = 0.5, hi = 4.0;
  double r = find_root([](double x) { return std::cos(x); }, lo, hi, 1e-13);
  CHECK(r >= lo);
  CHECK(r <= hi);
  CHECK(r == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return 1.0 + x * x; }, 0., 1., 1e-10), Error);
  CHECK_THROWS_AS(
      find_root([](double x) { return std::log(x - 2.0); }, 0., 1., 1e-10), Error);
}

TEST_CASE("airy: reference values") {
  // frozen from the Maclaurin/Gamma construction evaluated at 40 digits
  struct Ref {
    double x, ai, aip;
  };
  const Ref refs[] = {
      {0.0, 0.35502805388781723926, -0.25881940379280679841},
      {1.0, 0.13529241631288141552, -0.15914744129679321279},
      {2.5, 0.01572592338047048999, -0.02625088103590323036},
      {3.5, 0.00258409878698963496, -0.00500441396795258283},
      {4.5, 3.3025032351430898366e-4, -7.1786656755750888869e-4},
      {5.0, 1.0834442813607441735e-4, -2.4741389086846247600e-4},
      {7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6},
      {10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10},
      {20.0, 1.6916728686705403135e-27, -7.5863916257483549605e-27},
      {30.0, 3.2082175915504955711e-49, -1.7598765814327259821e-48},
      {-1.0, 0.53556088329235211880, -0.01016056711664520940},
      {-2.5, -0.11232506769296608919, 0.67885273426479436337},
      {-4.5, 0.29215278105595946688, -0.52336253231574770071},
      {-5.0, 0.35076100902411431979, 0.32719281855444313679},
      {-8.0, -0.05270505035638620262, 0.93556093819830655103},
      {-10.0, 0.04024123848644319069, 0.99626504413279005590},
      {-25.0, 0.16352657883042946949, 0.96237885138769741004},
      {-30.0, -0.08796818845684216283, 1.22862060263748513470},
  };
  for (const Ref& r : refs) {
    AiryPair p = airy_ai_and_prime(r.x);
    CHECK(p.ai == doctest::Approx(r.ai).epsilon(1e-12));
    CHECK(p.ai_prime == doctest::Approx(r.aip).epsilon(1e-12));
  }
}

TEST_CASE("airy: asymptotic self-check at x = 10") {
  AiryPair p = airy_ai_and_prime(10.0);
  double zeta = 2.0 / 3.0 * std::pow(10.0, 1.5);
  double lead = std::exp(-zeta) / (2.0 * std::sqrt(kPi) * std::pow(10.0, 0.25));
  // leading form deviates by the first series term u_1/zeta = 5/(72 zeta)
  double u1_over_zeta = 5.0 / (72.0 * zeta);
  CHECK(std::abs(p.ai / lead - 1.0) < 1.2 * u1_over_zeta);
  CHECK(std::abs(p.ai / lead - 1.0) > 0.8 * u1_over_zeta);
}

TEST_CASE("airy: first zero") {
  double z = find_root([](double x) { return airy_ai_and_prime(x).ai; }, -2.5,
                       -2.0, 1e-14);
  CHECK(std::abs(z - (-2.3381074104597670385)) < 1e-12);
  CHECK(std::abs(airy_ai_and_prime(z).ai) <= 1e-10);
}

TEST_CASE("airy: Ai'' = x Ai by second differences") {
  const double h = 1e-4;
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    double f0 = airy_ai_and_prime(x - h).ai;
    double f1 = airy_ai_and_prime(x).ai;
    double f2 = airy_ai_and_prime(x + h).ai;
    double second = (f2 - 2.0 * f1 + f0) / (h * h);
    CHECK(std::abs(second - x * f1) < 1e-6);
  }
  CHECK_THROWS_AS(airy_ai_and_prime(std::nan("")), Error);
}

TEST_CASE("integrate_adaptive: smooth and log-endpoint integrands") {
  double I = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  CHECK(I == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  // int_0^1 x log x dx = -1/4 after the clustering substitution x = t^2
  double J = integrate_adaptive(
      [](double t) { return 4.0 * t * t * t * std::log(std::max(t, 1e-300)); }, 0.0,
      1.0, 1e-11);
  CHECK(J == doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("integrate_segments: closed rectangle around a pole") {
  // oracle: Cauchy's theorem, winding integral = 2 pi i
  std::vector<Complex> box = {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0},
                              {-1.0, 1.0},  {-1.0, -1.0}};
  Complex I = integrate_segments([](Complex z) { return 1.0 / z; }, box, 1e-12);
  CHECK(std::abs(I - Complex(0.0, 2.0 * kPi)) < 1e-11);
}

TEST_CASE("bigreal: arithmetic and precision carry") {
  BigReal a(1.0, 256), b(3.0, 256);
  BigReal q = a / b;
  CHECK(q.precision() == 256);
  BigReal s = q * 3.0 - 1.0;
  CHECK(std::abs(s.to_double()) < 1e-70);
  CHECK(exp(log(BigReal(2.0, 200))).to_double() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pow_si(BigReal(2.0, 128), 10).to_double() == 1024.0);
  CHECK(BigReal(2.0, 64) > BigReal(1.0, 64));
}

TEST_CASE("gauss_legendre_big: extended nodes refine the double rule") {
  const BigQuadratureRule& r = gauss_legendre_big(24, 256);
  // weights sum to 2 at extended precision
  BigReal sum(0.0, 256 + 32);
  for (const BigReal& w : r.weights) sum += w;
  CHECK(std::abs((sum - 2.0).to_double()) < 1e-70);
  // integrates x^46 to extended accuracy
  BigReal acc(0.0, 256 + 32);
  for (int i = 0; i < 24; ++i) acc += r.weights[i] * pow_si(r.nodes[i], 46);
  BigReal exact = BigReal(2.0, 256 + 32) / 47.0;
  CHECK(std::abs((acc - exact).to_double()) < 1e-65);
}
