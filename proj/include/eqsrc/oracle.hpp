#pragma once

#include <vector>

#include "eqsrc/bigreal.hpp"
#include "eqsrc/equilibrium.hpp"
#include "eqsrc/field.hpp"
#include "eqsrc/parallel.hpp"

namespace eqsrc {

// Moments m[j][k] = int lambda^j e^{k lambda} e^{-n V(lambda)} d lambda at
// extended precision. The Gram-type systems built from these are
// exponentially ill-conditioned in n; 256 bits reaches desk scale n ~ 40.
struct MomentTable {
  int n = 0;
  int jmax = 0;
  int kmax = 0;
  PrecisionContext precision{kOracleDefaultBits};
  FieldSpec field = FieldSpec::quadratic(1.0);
  std::vector<BigReal> m;  // (jmax+1) x (kmax+1), row-major in j

  const BigReal& at(int j, int k) const { return m[std::size_t(j) * (kmax + 1) + k]; }
};

MomentTable compute_moments(const FieldSpec& field, int n, int jmax, int kmax,
                            PrecisionContext precision,
                            par::Mode mode = par::default_mode());

// Exact multiple orthogonal polynomial at extended precision:
// monomial_x basis for p_j (monic in x), exponential basis for q_j
// (monic in e^x, coefficients of e^{kx}).
struct ExactPoly {
  enum class Basis { monomial_x, exponential };
  Basis basis = Basis::monomial_x;
  int degree = 0;
  int n = 0;
  std::vector<BigReal> coeffs;  // ascending, coeffs[degree] = 1

  BigReal eval_big(const BigReal& x) const;
  double eval(double x) const { return eval_big(BigReal(x, 256)).to_double(); }
  // log|p(x)| and sign, safe for values far outside double range
  double log_abs_eval(double x, int& sign) const;
};

// Type II polynomial p_j from the orthogonality conditions against
// e^{kx} e^{-nV}, k = 0..j-1 (partial-pivot solve).
ExactPoly exact_p(const MomentTable& moments, int j);
// Type I polynomial q_j from the conditions against x^k e^{-nV}.
ExactPoly exact_q(const MomentTable& moments, int j);
// Same polynomial through the bordered-determinant identity; must agree
// with exact_q (algebraic identity check).
ExactPoly exact_q_determinant(const MomentTable& moments, int j);

// h_j = int p_j(x) q_j(e^x) e^{-nV} dx as a bilinear moment form.
BigReal exact_h(const MomentTable& moments, const ExactPoly& p, const ExactPoly& q);

enum class SaddleMode { full_sum, limit_phase };

// Steepest-descent evaluation of p_n^{(n)}(x) for V = x^2/2 through the
// contour integral along the vertical line(s) through the saddle points.
double saddle_p_quadratic(double x, int n, SaddleMode mode);

// All real zeros in [lo, hi]; for the exponential basis these are the
// zeros in the variable z of q(e^z).
std::vector<double> real_zeros(const ExactPoly& poly, double lo, double hi);

// Kolmogorov distance between the zero counting measure and mu_V.
double counting_measure_distance(const std::vector<double>& zeros,
                                 const EquilibriumData& eq);

}  // namespace eqsrc
