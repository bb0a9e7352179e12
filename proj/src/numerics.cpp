#include "eqsrc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "eqsrc/bigreal.hpp"
#include "eqsrc/errors.hpp"

namespace eqsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule r;
  r.order = n;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));  // guess for i-th root from below
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, p, dp);
    r.nodes[i] = -std::abs(x);
    r.nodes[n - 1 - i] = std::abs(x);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
  if (order < 2) fail("invalid-argument", "gauss_legendre: order must be >= 2");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss_legendre(order)).first;
  return it->second;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  if (!(lo < hi)) fail("invalid-argument", "find_root: requires lo < hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb))
    fail("eval-error", "find_root: non-finite function value at bracket endpoint");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) fail("bracket-error", "find_root: no sign change on [lo, hi]");

  // Brent's method: inverse quadratic / secant steps with bisection fallback.
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b, b = c, c = a;
      fa = fb, fb = fc, fc = fa;
    }
    double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, rr = fb / fc;
        p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) fail("eval-error", "find_root: non-finite function value");
    if ((fb > 0) == (fc > 0)) {
      c = a, fc = fa;
      d = b - a, e = d;
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Airy Ai and Ai'
// ---------------------------------------------------------------------------

namespace {

const double kAiryAlpha = 0.35502805388781723926;   // Ai(0)  = 3^{-2/3}/Gamma(2/3)
const double kAiryBeta = 0.25881940379280679841;    // -Ai'(0) = 3^{-1/3}/Gamma(1/3)

AiryPair airy_series_double(double x) {
  double x2 = x * x, x3 = x2 * x;
  double tf = 1.0, f = 1.0, fp = 0.0;
  double tg = x, g = x, gp = 1.0;
  for (int k = 0; k < 60; ++k) {
    fp += tf * x2 / (3 * k + 2);
    gp += tg * x2 / (3 * k + 3);
    tf *= x3 / ((3 * k + 2) * (3 * k + 3));
    f += tf;
    tg *= x3 / ((3 * k + 3) * (3 * k + 4));
    g += tg;
    if (std::abs(tf) < 1e-20 * std::abs(f) && std::abs(tg) < 1e-20 * std::abs(g)) break;
  }
  return {kAiryAlpha * f - kAiryBeta * g, kAiryAlpha * fp - kAiryBeta * gp};
}

// Same series in extended precision. In the band 2.5 < |x| < 9 the
// cancellation between the f and g sums exceeds what double can absorb
// while the asymptotic expansion has not yet reached 1e-12 truncation error.
AiryPair airy_series_big(double x) {
  const int prec = 220;
  BigReal alpha(prec), beta(prec), third(1.0 / 3.0, prec);
  {
    BigReal g23(prec), g13(prec), t(prec);
    mpfr_set_d(t.raw(), 2.0 / 3.0, MPFR_RNDN);
    mpfr_set_ui(t.raw(), 2, MPFR_RNDN);
    mpfr_div_ui(t.raw(), t.raw(), 3, MPFR_RNDN);
    mpfr_gamma(g23.raw(), t.raw(), MPFR_RNDN);
    mpfr_set_ui(t.raw(), 1, MPFR_RNDN);
    mpfr_div_ui(t.raw(), t.raw(), 3, MPFR_RNDN);
    mpfr_gamma(g13.raw(), t.raw(), MPFR_RNDN);
    BigReal three(3.0, prec);
    // alpha = 3^{-2/3}/Gamma(2/3), beta = 3^{-1/3}/Gamma(1/3)
    BigReal p23(prec), p13(prec);
    mpfr_set_d(t.raw(), -2.0, MPFR_RNDN);
    mpfr_div_ui(t.raw(), t.raw(), 3, MPFR_RNDN);
    mpfr_pow(p23.raw(), three.raw(), t.raw(), MPFR_RNDN);
    mpfr_set_d(t.raw(), -1.0, MPFR_RNDN);
    mpfr_div_ui(t.raw(), t.raw(), 3, MPFR_RNDN);
    mpfr_pow(p13.raw(), three.raw(), t.raw(), MPFR_RNDN);
    alpha = p23 / g23;
    beta = p13 / g13;
  }
  BigReal bx(x, prec);
  BigReal x2 = bx * bx, x3 = x2 * bx;
  BigReal tf(1.0, prec), f(1.0, prec), fp(0.0, prec);
  BigReal tg = bx, g = bx, gp(1.0, prec);
  for (int k = 0; k < 200; ++k) {
    fp += tf * x2 / double(3 * k + 2);
    gp += tg * x2 / double(3 * k + 3);
    tf *= x3 / double((3 * k + 2) * (3 * k + 3));
    f += tf;
    tg *= x3 / double((3 * k + 3) * (3 * k + 4));
    g += tg;
    if (k > 20 && abs(tf).to_double() < 1e-70 && abs(tg).to_double() < 1e-70) break;
  }
  BigReal ai = alpha * f - beta * g;
  BigReal aip = alpha * fp - beta * gp;
  return {ai.to_double(), aip.to_double()};
}

// u_k, v_k coefficients of the large-argument expansions (DLMF 9.7).
void airy_uv(int kmax, std::vector<double>& u, std::vector<double>& v) {
  u.assign(kmax + 1, 0.0);
  v.assign(kmax + 1, 0.0);
  u[0] = v[0] = 1.0;
  for (int k = 0; k + 1 <= kmax; ++k) {
    u[k + 1] = u[k] * (6.0 * k + 1) * (6.0 * k + 3) * (6.0 * k + 5) /
               (216.0 * (k + 1) * (2.0 * k + 1));
    v[k + 1] = u[k + 1] * (6.0 * (k + 1) + 1) / (1.0 - 6.0 * (k + 1));
  }
}

AiryPair airy_asym_pos(double x) {
  double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  std::vector<double> u, v;
  airy_uv(40, u, v);
  double sa = 0.0, sp = 0.0, zk = 1.0;
  double prev = 1e300;
  for (int k = 0; k <= 40; ++k) {
    double term = u[k] * zk;
    if (std::abs(term) > prev) break;  // divergent tail
    sa += (k % 2 ? -term : term);
    sp += (k % 2 ? -v[k] * zk : v[k] * zk);
    prev = std::abs(term);
    zk /= zeta;
  }
  double pre = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
  double x14 = std::pow(x, 0.25);
  return {pre / x14 * sa, -pre * x14 * sp};
}

AiryPair airy_asym_neg(double x) {
  double t = -x;
  double zeta = 2.0 / 3.0 * std::pow(t, 1.5);
  std::vector<double> u, v;
  airy_uv(40, u, v);
  double pe = 0.0, qo = 0.0, re = 0.0, so = 0.0;
  double z2 = 1.0 / (zeta * zeta), zk = 1.0;
  for (int k = 0; 2 * k + 1 <= 40; ++k) {
    double sgn = (k % 2 ? -1.0 : 1.0);
    if (u[2 * k] * zk > 1e280) break;
    pe += sgn * u[2 * k] * zk;
    re += sgn * v[2 * k] * zk;
    qo += sgn * u[2 * k + 1] * zk / zeta;
    so += sgn * v[2 * k + 1] * zk / zeta;
    zk *= z2;
    if (u[2 * k + 1] * zk / zeta < 1e-18) break;
  }
  double c = std::cos(zeta - kPi / 4), s = std::sin(zeta - kPi / 4);
  double t14 = std::pow(t, 0.25);
  double ai = (c * pe + s * qo) / (std::sqrt(kPi) * t14);
  double aip = t14 / std::sqrt(kPi) * (s * re - c * so);
  return {ai, aip};
}

}  // namespace

AiryPair airy_ai_and_prime(double x) {
  if (!std::isfinite(x)) fail("range-error", "airy_ai_and_prime: non-finite argument");
  if (std::abs(x) > 1e100) fail("range-error", "airy_ai_and_prime: argument out of range");
  double ax = std::abs(x);
  if (ax <= 2.5) return airy_series_double(x);
  if (ax < 9.0) return airy_series_big(x);
  return x > 0 ? airy_asym_pos(x) : airy_asym_neg(x);
}

// ---------------------------------------------------------------------------
// Panel-doubling integration
// ---------------------------------------------------------------------------

namespace {

template <class T, class F>
T gl_composite(const F& f, double a, double b, int panels, const QuadratureRule& rule) {
  T total{};
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    T acc{};
    for (int i = 0; i < rule.order; ++i)
      acc += f(mid + 0.5 * h * rule.nodes[i]) * rule.weights[i];
    total += acc * (0.5 * h);
  }
  return total;
}

template <class T, class F>
T integrate_doubling(const F& f, double a, double b, double tol) {
  if (a == b) return T{};
  const QuadratureRule& rule = gauss_legendre(20);
  int panels = 1;
  T prev = gl_composite<T>(f, a, b, panels, rule);
  for (int d = 0; d < 16; ++d) {
    panels *= 2;
    T cur = gl_composite<T>(f, a, b, panels, rule);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  fail("convergence-error", "integrate: panel doubling did not converge");
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  return integrate_doubling<double>(f, a, b, tol);
}

Complex integrate_adaptive_complex(const std::function<Complex(double)>& f,
                                   double a, double b, double tol) {
  return integrate_doubling<Complex>(f, a, b, tol);
}

Complex integrate_segments(const std::function<Complex(Complex)>& f,
                           const std::vector<Complex>& waypoints, double tol) {
  if (waypoints.size() < 2)
    fail("invalid-argument", "integrate_segments: need at least two waypoints");
  Complex total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    Complex z0 = waypoints[i], dz = waypoints[i + 1] - waypoints[i];
    if (dz == Complex(0.0)) continue;
    total += integrate_adaptive_complex(
                 [&](double t) { return f(z0 + t * dz); }, 0.0, 1.0, tol) *
             dz;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Extended-precision Gauss-Legendre (used by the moment quadratures)
// ---------------------------------------------------------------------------

namespace {

void legendre_big(int n, const BigReal& x, BigReal& p, BigReal& dp) {
  int prec = x.precision();
  BigReal p0(1.0, prec), p1 = x;
  for (int k = 2; k <= n; ++k) {
    BigReal p2 = (x * p1 * double(2 * k - 1) - p0 * double(k - 1)) / double(k);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = (x * p1 - p0) * double(n) / (x * x - BigReal(1.0, prec));
}

BigQuadratureRule make_gauss_legendre_big(int order, int bits) {
  const int wp = bits + 32;
  BigQuadratureRule r;
  r.order = order;
  QuadratureRule seed = gauss_legendre(order);
  r.nodes.reserve(order);
  r.weights.reserve(order);
  for (int i = 0; i < order; ++i) {
    BigReal x(seed.nodes[i], wp);
    BigReal p(wp), dp(wp);
    for (int it = 0; it < 40; ++it) {
      legendre_big(order, x, p, dp);
      BigReal dx = p / dp;
      x -= dx;
      if (abs(dx).to_double() < std::ldexp(1.0, -bits - 16)) break;
    }
    legendre_big(order, x, p, dp);
    BigReal w = BigReal(2.0, wp) / ((BigReal(1.0, wp) - x * x) * dp * dp);
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return r;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  std::size_t n = x_.size();
  if (n < 3 || y_.size() != n)
    fail("invalid-argument", "CubicSpline: need >= 3 matching knots");
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  // Tridiagonal sweep, natural boundary conditions.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    double mu = h0 / (h0 + h1);
    double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0) / (h0 + h1);
    double p = mu * c[i - 1] + 2.0;
    c[i] = (mu - 1.0) / p;
    d[i] = (rhs - mu * d[i - 1]) / p;
  }
  for (std::size_t i = n - 2; i >= 1; --i) m_[i] = c[i] * m_[i + 1] + d[i];
}

std::size_t CubicSpline::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it - x_.begin();
  if (i == 0) return 0;
  if (i >= x_.size()) return x_.size() - 2;
  return i - 1;
}

double CubicSpline::operator()(double x) const {
  std::size_t i = segment(x);
  double h = x_[i + 1] - x_[i];
  double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return A * y_[i] + B * y_[i + 1] +
         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
  std::size_t i = segment(x);
  double h = x_[i + 1] - x_[i];
  double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         ((3.0 * B * B - 1.0) * m_[i + 1] - (3.0 * A * A - 1.0) * m_[i]) * h / 6.0;
}

const BigQuadratureRule& gauss_legendre_big(int order, int bits) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, BigQuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(order, bits);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, make_gauss_legendre_big(order, bits)).first;
  return it->second;
}

}  // namespace eqsrc
