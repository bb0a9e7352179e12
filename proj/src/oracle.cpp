#include "eqsrc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "eqsrc/errors.hpp"
#include "eqsrc/jmap.hpp"

namespace eqsrc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Window end test in double: log of |lambda|^jmax e^{k lambda - n V}.
double log_envelope(const FieldSpec& field, int n, int k, int jmax, double x) {
  double lx = (x == 0.0) ? -745.0 : std::log(std::abs(x));
  return jmax * std::max(lx, -745.0) + k * x - n * field.V(x);
}

// One moment row: m[j][k] for all j at fixed k, integrated over a window
// centered at the maximizer of k lambda - n V(lambda).
void moment_row(const FieldSpec& field, int n, int jmax, int k, int bits,
                std::vector<BigReal>& out) {
  // peak of the exponent: n V'(lambda) = k
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && n * field.dV(lo) > k; ++i) lo *= 2.0;
  for (int i = 0; i < 200 && n * field.dV(hi) < k; ++i) hi *= 2.0;
  double peak = find_root([&](double x) { return n * field.dV(x) - k; }, lo, hi, 1e-12);

  // widen until the envelope drops 50 e-folds below its max
  double width = std::sqrt(100.0 / std::max(1e-8, n * field.d2V(peak)));
  double wlo = peak - width, whi = peak + width;
  double env_max = log_envelope(field, n, k, jmax, peak);
  for (int i = 0; i < 200; ++i) {
    bool grown = false;
    double span = whi - wlo;
    if (log_envelope(field, n, k, jmax, wlo) > env_max - 50.0) wlo -= 0.5 * span, grown = true;
    if (log_envelope(field, n, k, jmax, whi) > env_max - 50.0) whi += 0.5 * span, grown = true;
    // the max can sit away from the peak once |lambda|^jmax is included
    env_max = std::max(env_max, std::max(log_envelope(field, n, k, jmax, wlo + 0.25 * span),
                                         log_envelope(field, n, k, jmax, whi - 0.25 * span)));
    if (!grown) break;
    if (i == 199) fail("range-error", "compute_moments: tail bound unreachable");
  }

  const int wp = bits + 16;
  const BigQuadratureRule& rule = gauss_legendre_big(48, wp);
  const BigReal blo(wlo, wp), bhi(whi, wp);

  std::vector<BigReal> prev;
  int panels = 4;
  for (int level = 0;; ++level, panels *= 2) {
    std::vector<BigReal> sums(jmax + 1, BigReal(0.0, wp));
    std::vector<BigReal> mags(jmax + 1, BigReal(0.0, wp));  // absolute-value scale
    BigReal h = (bhi - blo) / double(panels);
    for (int pnl = 0; pnl < panels; ++pnl) {
      BigReal mid = blo + h * (pnl + 0.5);
      for (int q = 0; q < rule.order; ++q) {
        BigReal lam = mid + h * 0.5 * rule.nodes[q];
        BigReal w = rule.weights[q] * (h * 0.5);
        // e^{k lam - n V(lam)}
        BigReal expo = lam * double(k) - field.V_big(lam) * double(n);
        BigReal base = exp(expo) * w;
        BigReal abase = abs(base);
        for (int j = 0; j <= jmax; ++j) {
          sums[j] += base;
          mags[j] += abase;
          base *= lam;
          abase *= abs(lam);
        }
      }
    }
    if (!prev.empty()) {
      // odd moments may cancel to zero; measure against the |integrand| mass
      bool done = true;
      double cap = std::ldexp(1.0, -(bits - 8));
      for (int j = 0; j <= jmax && done; ++j) {
        BigReal diff = abs(sums[j] - prev[j]);
        if ((diff / mags[j]).to_double() > cap) done = false;
      }
      if (done) {
        out = std::move(sums);
        return;
      }
    }
    if (level >= 10)
      fail("convergence-error", "compute_moments: panel doubling did not converge");
    prev = std::move(sums);
  }
}

}  // namespace

MomentTable compute_moments(const FieldSpec& field, int n, int jmax, int kmax,
                            PrecisionContext precision, par::Mode mode) {
  if (n < 1) fail("invalid-argument", "compute_moments: n must be positive");
  if (precision.bits < 53) fail("invalid-argument", "compute_moments: bits must be >= 53");
  if (jmax > 3 * n || kmax > 3 * n)
    fail("invalid-argument", "compute_moments: jmax, kmax capped at 3n (desk scale)");
  MomentTable t;
  t.n = n;
  t.jmax = jmax;
  t.kmax = kmax;
  t.precision = precision;
  t.field = field;
  t.m.assign(std::size_t(jmax + 1) * (kmax + 1), BigReal(precision.bits));

  // warm the shared node cache before the parallel region
  gauss_legendre_big(48, precision.bits + 16);

  std::vector<std::vector<BigReal>> rows(kmax + 1);
  par::parallel_for(
      static_cast<std::size_t>(kmax + 1),
      [&](std::size_t k) {
        moment_row(field, n, jmax, static_cast<int>(k), precision.bits, rows[k]);
      },
      mode);
  for (int k = 0; k <= kmax; ++k)
    for (int j = 0; j <= jmax; ++j) t.m[std::size_t(j) * (kmax + 1) + k] = rows[k][j];
  if (!(t.at(0, 0) > BigReal(0.0, precision.bits)))
    fail("range-error", "compute_moments: m[0][0] must be positive");
  return t;
}

namespace {

// Partial-pivot Gaussian elimination; A is row-major (rows x cols), solves
// A x = rhs in place. Throws degeneracy-error on numerically singular A.
std::vector<BigReal> solve_dense(std::vector<BigReal> A, std::vector<BigReal> rhs,
                                 int nn, int bits) {
  auto at = [&](int r, int c) -> BigReal& { return A[std::size_t(r) * nn + c]; };
  for (int col = 0; col < nn; ++col) {
    int piv = col;
    for (int r = col + 1; r < nn; ++r)
      if (abs(at(r, col)) > abs(at(piv, col))) piv = r;
    if (at(piv, col).is_zero())
      fail("degeneracy-error", "solve_dense: singular moment system");
    if (piv != col) {
      for (int c = col; c < nn; ++c) std::swap(at(piv, c), at(col, c));
      std::swap(rhs[piv], rhs[col]);
    }
    for (int r = col + 1; r < nn; ++r) {
      BigReal f = at(r, col) / at(col, col);
      if (f.is_zero()) continue;
      for (int c = col; c < nn; ++c) at(r, c) -= f * at(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<BigReal> x(nn, BigReal(bits));
  for (int r = nn - 1; r >= 0; --r) {
    BigReal acc = rhs[r];
    for (int c = r + 1; c < nn; ++c) acc -= at(r, c) * x[c];
    x[r] = acc / at(r, r);
  }
  return x;
}

BigReal determinant(std::vector<BigReal> A, int nn, int bits) {
  auto at = [&](int r, int c) -> BigReal& { return A[std::size_t(r) * nn + c]; };
  BigReal det(1.0, bits);
  for (int col = 0; col < nn; ++col) {
    int piv = col;
    for (int r = col + 1; r < nn; ++r)
      if (abs(at(r, col)) > abs(at(piv, col))) piv = r;
    if (at(piv, col).is_zero()) return BigReal(0.0, bits);
    if (piv != col) {
      for (int c = col; c < nn; ++c) std::swap(at(piv, c), at(col, c));
      det = -det;
    }
    det *= at(col, col);
    for (int r = col + 1; r < nn; ++r) {
      BigReal f = at(r, col) / at(col, col);
      if (f.is_zero()) continue;
      for (int c = col; c < nn; ++c) at(r, c) -= f * at(col, c);
    }
  }
  return det;
}

}  // namespace

BigReal ExactPoly::eval_big(const BigReal& x) const {
  int prec = std::max(x.precision(), coeffs.empty() ? 53 : coeffs[0].precision());
  if (basis == Basis::monomial_x) {
    BigReal acc(0.0, prec);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
  BigReal ex = exp(x);
  BigReal acc(0.0, prec);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * ex + coeffs[i];
  return acc;
}

double ExactPoly::log_abs_eval(double x, int& sign) const {
  int prec = coeffs.empty() ? 53 : coeffs[0].precision();
  BigReal v = eval_big(BigReal(x, prec));
  sign = v.sign();
  if (v.is_zero()) return -1e300;
  return log(abs(v)).to_double();
}

ExactPoly exact_p(const MomentTable& moments, int j) {
  if (j < 1 || j > moments.jmax || j - 1 > moments.kmax)
    fail("invalid-argument", "exact_p: moment table does not cover degree j");
  int bits = moments.precision.bits;
  std::vector<BigReal> A(std::size_t(j) * j, BigReal(bits)), rhs(j, BigReal(bits));
  for (int k = 0; k < j; ++k) {
    for (int i = 0; i < j; ++i) A[std::size_t(k) * j + i] = moments.at(i, k);
    rhs[k] = -moments.at(j, k);
  }
  ExactPoly p;
  p.basis = ExactPoly::Basis::monomial_x;
  p.degree = j;
  p.n = moments.n;
  p.coeffs = solve_dense(std::move(A), std::move(rhs), j, bits);
  p.coeffs.push_back(BigReal(1.0, bits));
  return p;
}

ExactPoly exact_q(const MomentTable& moments, int j) {
  if (j < 0) fail("invalid-argument", "exact_q: j must be nonnegative");
  if (j > moments.kmax || j - 1 > moments.jmax)
    fail("invalid-argument", "exact_q: moment table does not cover degree j");
  int bits = moments.precision.bits;
  ExactPoly q;
  q.basis = ExactPoly::Basis::exponential;
  q.degree = j;
  q.n = moments.n;
  if (j == 0) {
    q.coeffs = {BigReal(1.0, bits)};
    return q;
  }
  std::vector<BigReal> A(std::size_t(j) * j, BigReal(bits)), rhs(j, BigReal(bits));
  for (int i = 0; i < j; ++i) {
    for (int k = 0; k < j; ++k) A[std::size_t(i) * j + k] = moments.at(i, k);
    rhs[i] = -moments.at(i, j);
  }
  q.coeffs = solve_dense(std::move(A), std::move(rhs), j, bits);
  q.coeffs.push_back(BigReal(1.0, bits));
  return q;
}

ExactPoly exact_q_determinant(const MomentTable& moments, int j) {
  if (j < 1 || j > moments.kmax || j - 1 > moments.jmax)
    fail("invalid-argument", "exact_q_determinant: table does not cover j");
  int bits = moments.precision.bits;
  // cofactors along the bordered row [1, e^z, ..., e^{jz}]
  std::vector<BigReal> cof(j + 1, BigReal(bits));
  for (int drop = 0; drop <= j; ++drop) {
    std::vector<BigReal> minor;
    minor.reserve(std::size_t(j) * j);
    for (int r = 0; r < j; ++r)
      for (int c = 0; c <= j; ++c)
        if (c != drop) minor.push_back(moments.at(r, c));
    BigReal d = determinant(std::move(minor), j, bits);
    cof[drop] = ((j + drop) % 2 == 0) ? d : -d;
  }
  if (cof[j].is_zero())
    fail("degeneracy-error", "exact_q_determinant: vanishing leading cofactor");
  ExactPoly q;
  q.basis = ExactPoly::Basis::exponential;
  q.degree = j;
  q.n = moments.n;
  q.coeffs.resize(j + 1, BigReal(bits));
  for (int kk = 0; kk <= j; ++kk) q.coeffs[kk] = cof[kk] / cof[j];
  return q;
}

BigReal exact_h(const MomentTable& moments, const ExactPoly& p, const ExactPoly& q) {
  if (p.degree != q.degree || p.n != q.n)
    fail("invalid-argument", "exact_h: p and q must share degree and n");
  if (p.degree > moments.jmax || q.degree > moments.kmax)
    fail("invalid-argument", "exact_h: moment table does not cover the degree");
  int bits = moments.precision.bits;
  BigReal h(0.0, bits);
  for (int i = 0; i <= p.degree; ++i)
    for (int k = 0; k <= q.degree; ++k) h += p.coeffs[i] * q.coeffs[k] * moments.at(i, k);
  return h;
}

double saddle_p_quadratic(double x, int n, SaddleMode mode) {
  if (n < 1) fail("invalid-argument", "saddle_p_quadratic: n must be positive");
  MapParams p = new_map(1.0, 0.5);
  double span = p.b - p.a;
  if (std::abs(x - p.a) < 0.02 * span || std::abs(x - p.b) < 0.02 * span)
    fail("coalescence-error", "saddle_p_quadratic: x too close to a support edge");

  bool bulk = (x > p.a && x < p.b);
  double sigma, vsad;
  if (bulk) {
    CurvePoint cp = boundary_inverse(p, x, Side::plus);
    sigma = cp.u;
    vsad = cp.v;
  } else {
    sigma = invert_I1(p, Complex(x, 0.0)).real();
    vsad = 0.0;
  }

  // n F_n(s) = n (s + 1/2 - x)^2 / 2 + sum_i Log(s + 1/2 - (i-1)/n); the
  // exponentiated sum is branch-free (the product is a polynomial).
  auto nF = [&](Complex s) -> Complex {
    Complex acc = 0.5 * double(n) * (s + 0.5 - x) * (s + 0.5 - x);
    if (mode == SaddleMode::full_sum) {
      for (int i = 1; i <= n; ++i) acc += std::log(s + 0.5 - double(i - 1) / n);
    } else {
      // limit phase F plus the 1/n correction term
      Complex lp = (s + 0.5) * std::log(s + 0.5) - (s - 0.5) * std::log(s - 0.5) - 1.0;
      acc += double(n) * lp;
      acc += 0.5 * (std::log(s + 0.5) - std::log(s - 0.5));
    }
    return acc;
  };

  double c_ref = nF(Complex(sigma, vsad == 0.0 ? 0.0 : vsad)).real();
  if (vsad == 0.0) c_ref = nF(Complex(sigma, 1e-9)).real();

  // truncation height: integrand 45 e-folds below the saddle
  double T = vsad + std::sqrt(90.0 / n);
  while (nF(Complex(sigma, T)).real() > c_ref - 45.0 && T < 1e3) T *= 1.5;

  auto integrand = [&](double tau) -> Complex {
    return std::exp(nF(Complex(sigma, tau)) - c_ref);
  };
  Complex I(0.0, 0.0);
  if (bulk) {
    I = integrate_adaptive_complex(integrand, 0.0, 0.5 * vsad, 1e-12) +
        integrate_adaptive_complex(integrand, 0.5 * vsad, 1.5 * vsad, 1e-12) +
        integrate_adaptive_complex(integrand, 1.5 * vsad, T, 1e-12);
  } else {
    I = integrate_adaptive_complex(integrand, 0.0, T, 1e-12);
  }
  // p = sqrt(n)/(sqrt(2 pi) i) * integral over the full line; by Schwarz
  // symmetry the line integral is 2i Re of the upper half.
  return std::sqrt(double(n) / (2.0 * kPi)) * 2.0 * I.real() * std::exp(c_ref);
}

std::vector<double> real_zeros(const ExactPoly& poly, double lo, double hi) {
  if (!(lo < hi)) fail("invalid-argument", "real_zeros: requires lo < hi");
  int prec = poly.coeffs.empty() ? 53 : poly.coeffs[0].precision();
  auto sign_at = [&](double x) { return poly.eval_big(BigReal(x, prec)).sign(); };

  int grid = 50 * std::max(1, poly.degree);
  std::vector<double> zeros;
  double prev_x = lo;
  int prev_s = sign_at(lo);
  for (int i = 1; i <= grid; ++i) {
    double x = lo + (hi - lo) * i / grid;
    int s = sign_at(x);
    if (prev_s == 0) {
      zeros.push_back(prev_x);
    } else if (s != 0 && s != prev_s) {
      double aa = prev_x, bb = x;
      for (int it = 0; it < 100 && bb - aa > 1e-12; ++it) {
        double mid = 0.5 * (aa + bb);
        int ms = sign_at(mid);
        if (ms == 0) {
          aa = bb = mid;
          break;
        }
        (ms == prev_s ? aa : bb) = mid;
      }
      zeros.push_back(0.5 * (aa + bb));
    }
    prev_x = x;
    prev_s = (s != 0) ? s : prev_s;
  }
  return zeros;
}

double counting_measure_distance(const std::vector<double>& zeros,
                                 const EquilibriumData& eq) {
  if (zeros.empty())
    fail("invalid-argument", "counting_measure_distance: no zeros given");
  std::vector<double> z = zeros;
  std::sort(z.begin(), z.end());
  std::size_t n = z.size();
  auto F = [&](double x) { return std::clamp(eq.mass_from_a(x), 0.0, 1.0); };
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double Fi = F(z[i]);
    d = std::max(d, std::abs(Fi - double(i) / n));
    d = std::max(d, std::abs(Fi - double(i + 1) / n));
    if (i + 1 < n) {
      double Fm = F(0.5 * (z[i] + z[i + 1]));
      d = std::max(d, std::abs(Fm - double(i + 1) / n));
    }
  }
  return d;
}

}  // namespace eqsrc
