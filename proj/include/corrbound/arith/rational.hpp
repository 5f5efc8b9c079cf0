#pragma once

#include <gmpxx.h>

#include <string>

namespace corrbound {

// gmpxx rationals stay canonical under arithmetic on canonical operands.
using Rational = mpq_class;
using Integer = mpz_class;

// p/q in lowest terms. The two-argument gmpxx constructors do not
// canonicalize, so every construction from computed parts goes through here.
Rational ratio(const Integer& p, const Integer& q);
inline Rational ratio(long p, long q) { return ratio(Integer(p), Integer(q)); }

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
// Decimal rendering with `digits` significant digits (round to nearest).
std::string to_decimal(const Rational& q, int digits);
Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);
Rational pow(const Rational& q, unsigned k);

}  // namespace corrbound
