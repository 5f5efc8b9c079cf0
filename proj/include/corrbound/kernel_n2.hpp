#pragma once

// Closed-form reproducing kernel for the pair-correlation problem (n = 2).
//
// With s(t) = sin(pi t)/(pi t), s_pm(x, y) = (s(x - y) pm s(x + y)) / 2,
//     a(x) = -s(x)/m + (pi x sin(pi x) + cos(pi x)) / (2 (pi m x)^2),
//     b(x) = cos(pi x) / (2 (pi m)^2 x),
// and u = 1/(pi m sqrt 2), the kernel is K(x, y) = (k_+ + k_-)(x/m, y/m) / m
// where
//     k_+(x, y) = (s_+(x, y) - s_+(u, y) a(x)/a(u)) / (1 - 1/(2 (pi m x)^2))
//     k_-(x, y) = (s_-(x, y) - s_-(u, y) b(x)/b(u)) / (1 - 1/(2 (pi m x)^2)).
// Both are evaluated after multiplying through by 2 (pi m x)^2, which clears
// the poles at x = 0; the removable singularity at x = pm u is handled by the
// Cauchy mean value theorem on the hull of x and pm u.

#include "corrbound/arith/interval.hpp"
#include "corrbound/arith/scalar.hpp"

namespace corrbound {

Interval kernel2_s(const Interval& t);
Interval kernel2_s_plus(const Interval& x, const Interval& y);
Interval kernel2_s_minus(const Interval& x, const Interval& y);
Interval kernel2_a(int m, const Interval& x);
Interval kernel2_b(int m, const Interval& x);

struct Kernel2Params {
  int m = 1;
  mpfr_prec_t prec = kDefaultPrecision;
  Interval u;    // 1 / (pi m sqrt 2)
  Interval a_u;  // a(u)
  Interval b_u;  // b(u)
  static Kernel2Params make(int m, mpfr_prec_t prec = kDefaultPrecision);
};

// K(0, 0) from 1 / ((1/sqrt 2) cot(1/(sqrt 2 m)) - (2m - 1)/(2m)).
Interval k00(int m, mpfr_prec_t prec = kDefaultPrecision);
// c_{2,m} = 1 / K(0, 0).
Interval c2(int m, mpfr_prec_t prec = kDefaultPrecision);

Interval kernel2_eval(int m, const Scalar& x, const Scalar& y, mpfr_prec_t prec = kDefaultPrecision);
Interval kernel2_eval(const Kernel2Params& p, const Interval& x, const Interval& y);

}  // namespace corrbound
