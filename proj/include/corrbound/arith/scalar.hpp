#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "corrbound/arith/interval.hpp"
#include "corrbound/arith/rational.hpp"

namespace corrbound {

// Raised when a transcendental is requested on an exact rational.
class TranscendentalInRationalMode : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exact rational or enclosure. Mixed operations promote the rational to a ball
// at the precision of the other operand.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(const Rational& q) : v_(q) {}   // NOLINT(google-explicit-constructor)
  Scalar(const Interval& x) : v_(x) {}   // NOLINT(google-explicit-constructor)
  Scalar(long v) : v_(Rational(v)) {}    // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const;
  // Enclosure at prec (exact rationals are rounded to a tight ball).
  Interval to_interval(mpfr_prec_t prec) const;
  mpfr_prec_t precision_or(mpfr_prec_t fallback) const;

  // Exact sign when known; throws if an enclosure straddles zero.
  int sign() const;
  bool is_zero() const;
  std::string to_string(int digits = 12) const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;

 private:
  std::variant<Rational, Interval> v_;
};

inline Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
inline Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
inline Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
inline Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

Scalar sin(const Scalar& x);
Scalar cos(const Scalar& x);

}  // namespace corrbound
