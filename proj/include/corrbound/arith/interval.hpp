#pragma once

// Midpoint-radius ball over MPFR. The midpoint carries the working precision;
// the radius is a double that is only ever rounded upward, so every operation
// returns a ball containing the exact result of the exact operation applied to
// any points of the operand balls.

#include <mpfr.h>

#include <string>

#include "corrbound/arith/rational.hpp"

namespace corrbound {

constexpr mpfr_prec_t kDefaultPrecision = 256;

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kDefaultPrecision);
  Interval(long v, mpfr_prec_t prec);
  Interval(const Rational& q, mpfr_prec_t prec);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval pi(mpfr_prec_t prec);
  // Ball [mid - rad, mid + rad]; mid is rounded to prec and the rounding is
  // folded into the radius.
  static Interval from_mid_rad(mpfr_srcptr mid, double rad, mpfr_prec_t prec);
  static Interval from_double(double v, mpfr_prec_t prec);
  // Decimal strings as produced by mid_string()/rad_string(); those are
  // recovered bit for bit. Other decimals get their conversion error added.
  static Interval from_strings(const std::string& mid, const std::string& rad,
                               mpfr_prec_t prec);
  // Smallest ball (at prec) containing both inputs.
  static Interval hull(const Interval& a, const Interval& b);

  mpfr_prec_t precision() const { return mpfr_get_prec(mid_); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_ptr mid_mut() { return mid_; }
  double rad() const { return rad_; }
  void add_error(double e);

  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  // Upper bound of |x| over the ball.
  double mag() const;
  // Lower bound of |x| over the ball (0 if the ball contains 0).
  double mig() const;

  bool contains_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_exact() const { return rad_ == 0.0; }
  bool contains(const Rational& q) const;
  bool contains(const Interval& o) const;
  bool overlaps(const Interval& o) const;

  Rational mid_rational() const;
  Rational lower_rational() const;
  Rational upper_rational() const;

  // Round-trip decimal form of the midpoint at its precision.
  std::string mid_string() const;
  std::string rad_string() const;
  // Human readable, digits significant digits of the midpoint.
  std::string to_string(int digits = 12) const;
  // Directed-rounded endpoints printed with the given number of digits.
  std::string lower_string(int digits) const;
  std::string upper_string(int digits) const;

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);
  Interval operator-() const;

  // In-place kernels for hot loops; the result precision is this->precision().
  void set_sum(const Interval& a, const Interval& b);
  void set_product(const Interval& a, const Interval& b);
  // this += a * b
  void add_product(const Interval& a, const Interval& b);
  // this = a * (num / den) for machine integers num, den != 0.
  void set_scaled(const Interval& a, long num, long den);
  void set_ratio(long num, long den);
  void set_zero();
  void mul_long(long k);

 private:
  void finish(int ternary);
  mpfr_t mid_;
  double rad_ = 0.0;
};

Interval operator+(Interval a, const Interval& b);
Interval operator-(Interval a, const Interval& b);
Interval operator*(Interval a, const Interval& b);
Interval operator/(Interval a, const Interval& b);

Interval sqr(const Interval& x);
Interval sqrt(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval cot(const Interval& x);
Interval abs(const Interval& x);
Interval pow(const Interval& x, unsigned k);
// sin(pi x)/(pi x) with the removable point handled.
Interval sinc_pi(const Interval& x);
// cos(pi q), sin(pi q): exact when q is a multiple of 1/2.
Interval cos_pi(const Rational& q, mpfr_prec_t prec);
Interval sin_pi(const Rational& q, mpfr_prec_t prec);

// Upward-rounded double helpers used for radius bookkeeping.
double add_up(double a, double b);
double mul_up(double a, double b);
double div_up(double a, double b);
// Upper bound for one rounding of a value with the exponent of x.
double ulp_bound(mpfr_srcptr x);

}  // namespace corrbound
