#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace eqsrc {

using Complex = std::complex<double>;

// Gauss-Legendre rule on [-1, 1]: nodes strictly increasing, symmetric about
// zero, weights summing to 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

// Nodes and weights exact to ~1e-15; deterministic for fixed order.
// Throws invalid-argument for order < 2.
QuadratureRule gauss_legendre(int order);

// Safeguarded bracketed root finding (Brent). Requires f(lo)*f(hi) <= 0;
// returns x inside [lo, hi] with bracket width <= tol.
// Throws bracket-error when there is no sign change, eval-error on
// non-finite f values.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

struct AiryPair {
  double ai;
  double ai_prime;
};

// Airy Ai(x) and Ai'(x) for real x, relative error <= 1e-12 for |x| <= 30.
// Maclaurin series near the origin, standard asymptotic expansions with
// exponential prefactors for large |x|; the band where neither is accurate
// in double is evaluated by the same series at extended working precision.
AiryPair airy_ai_and_prime(double x);

// Significand precision (bits) for extended arithmetic. Core modules run in
// native double; only the oracle consumes this knob.
struct PrecisionContext {
  int bits = 53;
};

inline constexpr int kOracleDefaultBits = 256;

// Panel-doubling composite Gauss-Legendre over [a, b]: the panel count
// doubles until two successive estimates agree to tol (absolute +
// relative), at most 16 doublings. Throws convergence-error on failure.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol);

Complex integrate_adaptive_complex(const std::function<Complex(double)>& f,
                                   double a, double b, double tol);

// Complex line integral of f along the polyline through `waypoints`,
// each segment mapped to [0, 1] and integrated with panel doubling.
Complex integrate_segments(const std::function<Complex(Complex)>& f,
                           const std::vector<Complex>& waypoints, double tol);

// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double deriv(double x) const;
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace eqsrc
