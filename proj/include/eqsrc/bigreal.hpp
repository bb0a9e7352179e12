#pragma once

#include <mpfr.h>

#include <string>
#include <vector>

namespace eqsrc {

// RAII scalar over MPFR with per-value precision. Arithmetic results carry
// the larger precision of the two operands. Values are immutable from the
// caller's point of view apart from assignment, so concurrent reads are safe;
// distinct values may be used freely from different threads.
class BigReal {
 public:
  BigReal() { mpfr_init2(v_, 53), mpfr_set_zero(v_, 1); }
  explicit BigReal(int prec) { mpfr_init2(v_, prec), mpfr_set_zero(v_, 1); }
  BigReal(double x, int prec) { mpfr_init2(v_, prec), mpfr_set_d(v_, x, MPFR_RNDN); }
  BigReal(long x, int prec) { mpfr_init2(v_, prec), mpfr_set_si(v_, x, MPFR_RNDN); }

  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, 53);
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  static BigReal from_string(const std::string& s, int prec) {
    BigReal r(prec);
    mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN);
    return r;
  }

  int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(maxp(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(maxp(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(maxp(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(maxp(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  BigReal& operator+=(const BigReal& b) {
    bump(b);
    mpfr_add(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator-=(const BigReal& b) {
    bump(b);
    mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator*=(const BigReal& b) {
    bump(b);
    mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  BigReal& operator/=(const BigReal& b) {
    bump(b);
    mpfr_div(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }

  friend BigReal operator*(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(double a, const BigReal& b) { return b * a; }
  friend BigReal operator+(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_); }

  friend BigReal abs(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal sqrt(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal exp(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal log(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal pow_si(const BigReal& a, long e) {
    BigReal r(a.precision());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }

 private:
  static int maxp(const BigReal& a, const BigReal& b) {
    return a.precision() > b.precision() ? a.precision() : b.precision();
  }
  void bump(const BigReal& b) {
    if (precision() < b.precision()) mpfr_prec_round(v_, b.precision(), MPFR_RNDN);
  }
  mpfr_t v_;
};

// Gauss-Legendre nodes/weights on [-1, 1] at the requested precision
// (Newton refinement of the double-precision rule). Cached per (order, bits).
struct BigQuadratureRule {
  std::vector<BigReal> nodes;
  std::vector<BigReal> weights;
  int order = 0;
};

const BigQuadratureRule& gauss_legendre_big(int order, int bits);

}  // namespace eqsrc
