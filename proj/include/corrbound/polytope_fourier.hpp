#pragma once

// Fourier transforms chi_P(y) = int_P exp(-2 pi i <x, y>) dx of the simplex
// S_n, the cross-polytope C_n and H_{n-1}, from their closed forms.
//
// The closed forms are sums of terms
//     coeff * prod trig(pi * l_t(y)) * prod l_f(y)^{p_f}
// with integer linear forms l and signed integer powers p. At points where a
// denominator form vanishes the transform (an entire function) is evaluated
// as a limit along y + eps v: every term is expanded as a Laurent series in
// eps, the negative powers must cancel across terms, and the eps^0
// coefficient is the value.

#include <stdexcept>
#include <vector>

#include "corrbound/arith/interval.hpp"
#include "corrbound/arith/rational.hpp"
#include "corrbound/arith/scalar.hpp"

namespace corrbound {

class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ExpansionCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Negative powers of a limit expansion failed to cancel: the term table and
// the closed form disagree.
class NonCancellationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexInterval {
  Interval re, im;
};

using LinearForm = std::vector<long>;

struct TrigFactor {
  bool is_sin = false;
  LinearForm arg;  // trig(pi * arg(y))
};

struct FormulaTerm {
  Rational coeff;
  std::vector<TrigFactor> trig;
  std::vector<std::pair<LinearForm, int>> factors;  // l(y)^p, p may be negative
};

// prefactor * pi^{pi_power} * sum(terms)
struct TermFormula {
  int dim = 0;
  Rational prefactor = 1;
  int pi_power = 0;
  std::vector<FormulaTerm> terms;
};

TermFormula simplex_real_part_formula(int n);   // S: sum 2 sin^2(pi y_j) R_j
TermFormula simplex_imag_part_formula(int n);   // T: sum sin(2 pi y_j) R_j
TermFormula cross_polytope_formula(int n);
TermFormula polytope_h_formula(int n);          // H_{n-1}, dim = n - 1

// Coincidence structure of a point: which coordinates vanish and which
// pairs coincide.
struct SingularPattern {
  std::vector<int> zero_coords;
  std::vector<std::pair<int, int>> equal_pairs;
  bool any() const { return !zero_coords.empty() || !equal_pairs.empty(); }
  friend bool operator==(const SingularPattern&, const SingularPattern&) = default;
};

// Exact for rational coordinates; for enclosures a coordinate (or a
// difference) whose ball contains zero without being exactly zero raises
// SingularInputError.
SingularPattern singular_pattern(const std::vector<Scalar>& y);

// Direct evaluation; every denominator form must be nonzero at y.
Interval evaluate_formula(const TermFormula& f, const std::vector<Scalar>& y, mpfr_prec_t prec);
// Limit at an exact point, via Laurent expansion along a fixed direction.
Interval limit_formula(const TermFormula& f, const std::vector<Rational>& y, mpfr_prec_t prec,
                       int max_order = 32);

ComplexInterval ft_simplex(int n, const std::vector<Scalar>& y, mpfr_prec_t prec = kDefaultPrecision);
// Total: singular points are evaluated as limits.
Interval ft_cross_polytope(int n, const std::vector<Scalar>& y, mpfr_prec_t prec = kDefaultPrecision);
// Transform of scale * H_{n-1}: scale^{n-1} chi_H(scale * y). Total function.
Interval ft_H(int n, const Rational& scale, const std::vector<Scalar>& y,
              mpfr_prec_t prec = kDefaultPrecision, int max_order = 32);
// Limit evaluation; the caller's pattern must match the point exactly.
Interval ft_H_singular_limit(int n, const Rational& scale, const std::vector<Rational>& y,
                             const SingularPattern& pattern, mpfr_prec_t prec = kDefaultPrecision,
                             int max_order = 32);

}  // namespace corrbound
