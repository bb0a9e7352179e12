#pragma once

#include "eqsrc/equilibrium.hpp"

namespace eqsrc {

enum class Region { A, B, C, D };

struct RegionTag {
  Region tag;
  double delta;
};

// Complex value carried as mantissa * exp(exponent) so that quantities like
// e^{n g(z)} stay representable up to n ~ 1e4.
struct ScaledComplex {
  Complex mantissa{0.0, 0.0};
  double exponent = 0.0;

  Complex value() const { return mantissa * std::exp(exponent); }
  double log_abs() const { return std::log(std::abs(mantissa)) + exponent; }
};

struct ScaledReal {
  double mantissa = 0.0;
  double exponent = 0.0;
  double value() const { return mantissa * std::exp(exponent); }
  double log_abs() const { return std::log(std::abs(mantissa)) + exponent; }
};

enum class AsymForm { outside, bulk, edge_airy, edge_scaled };

struct AsymptoticResult {
  ScaledComplex value;
  RegionTag region;
  int n = 0;
  int k = 0;
  AsymForm form = AsymForm::outside;
};

enum class Cut { gamma1, gamma2 };

// w(s) = sqrt((s - s_a)(s - s_b)) single-valued off the chosen arc of
// gamma, with w(s)/s -> 1 at infinity. Throws near-cut-error within 1e-10
// of the cut arc.
Complex branch_sqrt(const EquilibriumData& eq, Complex s, Cut cut);

// G_k(s) = c1^k (s + 1/2)(s - 1/2)^k / w(s), cut on gamma1.
Complex eval_Gk(const EquilibriumData& eq, int k, Complex s);
// Ghat_k(s) = i e^{k(c1/2 + c0)} / sqrt(c1) * (s - 1/2)^{-k} / w(s),
// cut on gamma2.
Complex eval_Ghatk(const EquilibriumData& eq, int k, Complex s);

// r_k, theta_k of the bulk cosine forms (modulus and argument of the
// one-sided prefactors on the support).
void bulk_prefactor_p(const EquilibriumData& eq, int k, double x, double& r,
                      double& theta);
void bulk_prefactor_q(const EquilibriumData& eq, int k, double x, double& r,
                      double& theta);

// Region assignment in the closed upper half plane; boundary ties resolve
// toward the Airy regions (C/D over B over A). delta <= 0 selects the
// default 0.05 (b - a).
RegionTag classify_region(const EquilibriumData& eq, Complex z, double delta);

// Leading-order asymptotics of p^{(n)}_{n+k}(z). The Airy edge forms are
// evaluated for real z only; complex z in C/D raises domain-error
// (complex-argument Airy is out of scope).
AsymptoticResult asym_p(const EquilibriumData& eq, int n, int k, Complex z,
                        double delta = -1.0);
// Same for q^{(n)}_{n+k}(e^z); requires |Im z| < pi.
AsymptoticResult asym_q(const EquilibriumData& eq, int n, int k, Complex z,
                        double delta = -1.0);

// h^{(n)}_{n+k} = 2 pi c1^{k+1/2} e^{k(c1/2 + c0)} e^{n ell}.
ScaledReal asym_h(const EquilibriumData& eq, int n, int k);

// Closed-form right sides of the edge-scaled identities: the predicted
// value of e^{(n/2)(gt - g - V - ell)} p^{(n)}_{n+k}(z) at
// z = edge + f'(edge)^{-1} n^{-2/3} t (and the q counterpart with the
// opposite exponent sign).
double edge_scaled_p(const EquilibriumData& eq, int n, int k, double t, Edge edge);
double edge_scaled_q(const EquilibriumData& eq, int n, int k, double t, Edge edge);

}  // namespace eqsrc
