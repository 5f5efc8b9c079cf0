#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrbound/arith/interval.hpp"
#include "corrbound/arith/rational.hpp"

namespace corrbound {

using Exponent = std::vector<int>;

// Dense integer matrix, row-major; used for lattice maps and group elements.
struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<long> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  static IntMatrix identity(int n);
  long& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  long operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  IntMatrix transposed() const;
  long determinant() const;
  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
  friend bool operator==(const IntMatrix& x, const IntMatrix& y) = default;
  friend auto operator<=>(const IntMatrix& x, const IntMatrix& y) = default;
  std::vector<long> apply(const std::vector<long>& v) const;
};

// Affine form c + sum_i a_i x_i over rationals.
struct AffineForm {
  Rational constant;
  std::vector<Rational> coeffs;

  AffineForm() = default;
  explicit AffineForm(int nvars) : coeffs(static_cast<size_t>(nvars)) {}
  static AffineForm constant_form(int nvars, const Rational& c);
  static AffineForm variable(int nvars, int i, const Rational& scale = 1);
  bool references(int var) const { return coeffs[static_cast<size_t>(var)] != 0; }
  Rational evaluate(const std::vector<Rational>& x) const;
  AffineForm& operator+=(const AffineForm& o);
  AffineForm& operator-=(const AffineForm& o);
  AffineForm& operator*=(const Rational& s);
};
AffineForm operator+(AffineForm a, const AffineForm& b);
AffineForm operator-(AffineForm a, const AffineForm& b);
AffineForm operator*(const Rational& s, AffineForm a);

// Polynomial with rational coefficients in a fixed number of variables.
class MultiPoly {
 public:
  explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, const Rational& c);
  static MultiPoly variable(int nvars, int i);
  static MultiPoly monomial(const Exponent& e, const Rational& c = 1);
  static MultiPoly from_affine(const AffineForm& f);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponent& e) const;
  Rational constant_term() const;
  void add_term(const Exponent& e, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& s);
  friend MultiPoly operator*(const MultiPoly& p, const MultiPoly& q);
  friend bool operator==(const MultiPoly& p, const MultiPoly& q) = default;

  Rational evaluate(const std::vector<Rational>& x) const;
  Interval evaluate(const std::vector<Interval>& x) const;
  // p(M x) for a square integer matrix M.
  MultiPoly compose_linear(const IntMatrix& m) const;
  // Replace variable var by an affine form (which must not reference var).
  MultiPoly substitute(int var, const AffineForm& f) const;
  // Antiderivative in var with zero constant of integration.
  MultiPoly antiderivative(int var) const;
  MultiPoly pow(unsigned k) const;
  // Smallest positive rational multiple with coprime integer coefficients.
  MultiPoly primitive() const;

  std::string to_string() const;

 private:
  int nvars_;
  std::map<Exponent, Rational> terms_;
};

MultiPoly operator+(MultiPoly a, const MultiPoly& b);
MultiPoly operator-(MultiPoly a, const MultiPoly& b);
MultiPoly operator*(const Rational& s, MultiPoly p);

// One iterated integration step: variable `var` runs over [lower, upper].
struct IntegrationLimit {
  int var = 0;
  AffineForm lower, upper;
};

// Error raised when a limit refers to a variable that has already been
// integrated out (or to the variable of its own step).
class LimitOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integrates p over the region described by `limits`, innermost step first.
// Variables not integrated remain as free variables of the result.
MultiPoly poly_integrate_iterated(const MultiPoly& p, const std::vector<IntegrationLimit>& limits);

// Reynolds average (1/|G|) sum_g p(g x). A finite group is closed under
// inversion, so this is also the average of p(g^{-1} x).
MultiPoly poly_symmetrize(const MultiPoly& p, const std::vector<IntMatrix>& group_elements);

// Iterated-limit helper: a limit whose bounds are given as affine forms in
// variables (x_0 .. x_{n-1}) with a constant term.
IntegrationLimit make_limit(int nvars, int var, const Rational& lo_const,
                            const std::vector<std::pair<int, Rational>>& lo_terms,
                            const Rational& hi_const,
                            const std::vector<std::pair<int, Rational>>& hi_terms);

}  // namespace corrbound
