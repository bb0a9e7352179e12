#pragma once

#include <vector>

#include "eqsrc/bigreal.hpp"
#include "eqsrc/numerics.hpp"

namespace eqsrc {

// External field V. Supported kinds:
//   quadratic(t):  V(x) = x^2 / (2t), t > 0
//   quartic(u):    V(x) = x^4/4 + u x^2/2 + x/2
//   polynomial:    V(x) = sum coeffs[i] x^i, even leading degree with
//                  positive leading coefficient (superlinear growth)
class FieldSpec {
 public:
  enum class Kind { quadratic, quartic, polynomial };

  static FieldSpec quadratic(double t);
  static FieldSpec quartic(double u);
  static FieldSpec polynomial(std::vector<double> coeffs);

  Kind kind() const { return kind_; }
  double quadratic_t() const { return t_; }
  double quartic_u() const { return u_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double V(double x) const;
  double dV(double x) const;
  double d2V(double x) const;
  Complex V(Complex x) const;
  Complex dV(Complex x) const;
  BigReal V_big(const BigReal& x) const;

  // V'' bounded below by a positive constant (sufficient one-cut condition).
  bool strongly_convex() const;

  // Coefficients of V' in ascending degree (all supported kinds are
  // polynomial fields).
  std::vector<double> dV_coeffs() const;

 private:
  FieldSpec() = default;
  Kind kind_ = Kind::quadratic;
  double t_ = 1.0;
  double u_ = 0.0;
  std::vector<double> coeffs_;  // ascending degree, polynomial kind only
};

}  // namespace eqsrc
