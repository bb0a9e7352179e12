#include "eqsrc/field.hpp"

#include <cmath>

#include "eqsrc/errors.hpp"

namespace eqsrc {

FieldSpec FieldSpec::quadratic(double t) {
  if (!(t > 0.0)) fail("invalid-argument", "quadratic field requires t > 0");
  FieldSpec f;
  f.kind_ = Kind::quadratic;
  f.t_ = t;
  return f;
}

FieldSpec FieldSpec::quartic(double u) {
  FieldSpec f;
  f.kind_ = Kind::quartic;
  f.u_ = u;
  return f;
}

FieldSpec FieldSpec::polynomial(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.size() < 3)
    fail("invalid-argument", "polynomial field must have degree >= 2");
  int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg % 2 != 0 || coeffs.back() <= 0.0)
    fail("invalid-argument",
         "polynomial field needs even leading degree with positive leading "
         "coefficient (superlinear growth)");
  FieldSpec f;
  f.kind_ = Kind::polynomial;
  f.coeffs_ = std::move(coeffs);
  return f;
}

double FieldSpec::V(double x) const {
  switch (kind_) {
    case Kind::quadratic:
      return x * x / (2.0 * t_);
    case Kind::quartic:
      return 0.25 * x * x * x * x + 0.5 * u_ * x * x + 0.5 * x;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
      return acc;
    }
  }
  return 0.0;
}

double FieldSpec::dV(double x) const {
  switch (kind_) {
    case Kind::quadratic:
      return x / t_;
    case Kind::quartic:
      return x * x * x + u_ * x + 0.5;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 1;)
        acc = acc * x + coeffs_[i] * static_cast<double>(i);
      return acc;
    }
  }
  return 0.0;
}

double FieldSpec::d2V(double x) const {
  switch (kind_) {
    case Kind::quadratic:
      return 1.0 / t_;
    case Kind::quartic:
      return 3.0 * x * x + u_;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 2;)
        acc = acc * x + coeffs_[i] * static_cast<double>(i * (i - 1));
      return acc;
    }
  }
  return 0.0;
}

Complex FieldSpec::V(Complex x) const {
  switch (kind_) {
    case Kind::quadratic:
      return x * x / (2.0 * t_);
    case Kind::quartic:
      return 0.25 * x * x * x * x + 0.5 * u_ * x * x + 0.5 * x;
    case Kind::polynomial: {
      Complex acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
      return acc;
    }
  }
  return 0.0;
}

Complex FieldSpec::dV(Complex x) const {
  switch (kind_) {
    case Kind::quadratic:
      return x / t_;
    case Kind::quartic:
      return x * x * x + u_ * x + 0.5;
    case Kind::polynomial: {
      Complex acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 1;)
        acc = acc * x + coeffs_[i] * static_cast<double>(i);
      return acc;
    }
  }
  return 0.0;
}

BigReal FieldSpec::V_big(const BigReal& x) const {
  int prec = x.precision();
  switch (kind_) {
    case Kind::quadratic:
      return x * x / (2.0 * t_);
    case Kind::quartic: {
      BigReal x2 = x * x;
      return x2 * x2 * 0.25 + x2 * (0.5 * u_) + x * 0.5;
    }
    case Kind::polynomial: {
      BigReal acc(0.0, prec);
      for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + BigReal(coeffs_[i], prec);
      return acc;
    }
  }
  return BigReal(0.0, prec);
}

std::vector<double> FieldSpec::dV_coeffs() const {
  switch (kind_) {
    case Kind::quadratic:
      return {0.0, 1.0 / t_};
    case Kind::quartic:
      return {0.5, u_, 0.0, 1.0};
    case Kind::polynomial: {
      std::vector<double> d(coeffs_.size() - 1);
      for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = coeffs_[i] * static_cast<double>(i);
      return d;
    }
  }
  return {};
}

bool FieldSpec::strongly_convex() const {
  switch (kind_) {
    case Kind::quadratic:
      return true;
    case Kind::quartic:
      return u_ >= 0.0;  // V'' = 3x^2 + u
    case Kind::polynomial:
      return false;  // not established in general; callers must opt in
  }
  return false;
}

}  // namespace eqsrc
