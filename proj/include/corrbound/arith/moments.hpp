#pragma once

// Exact monomial moments over regions given by iterated affine limits.
//
// For a region R = { v_0 in [L_0, U_0], v_1 in [L_1, U_1], ... } (innermost
// first, every L_l, U_l affine in the outer variables) the table holds
// int_R x^e dx for every exponent e of total degree <= max_degree. The
// recursion runs from the outermost variable inward: the innermost integral
// of v^a is (U^{a+1} - L^{a+1})/(a+1), and powers of an affine bound are
// expanded one factor at a time, so a level costs one pass per power.
//
// Coordinates are rescaled by an integer s so that every bound has integer
// coefficients; the numerators then stay integral over a fixed denominator
// and no gcd work is done until a moment is read out.

#include <functional>
#include <vector>

#include "corrbound/arith/multipoly.hpp"
#include "corrbound/arith/rational.hpp"

namespace corrbound {

// Dense ranking of exponent vectors of length r with total degree <= dmax.
class DegreeIndex {
 public:
  DegreeIndex() = default;
  DegreeIndex(int r, int dmax, bool with_successors = true);
  int dims() const { return r_; }
  int max_degree() const { return dmax_; }
  size_t size() const { return size_; }
  size_t index(const int* e) const;
  const int* exponent(size_t idx) const { return exps_.data() + idx * static_cast<size_t>(r_); }
  int degree(size_t idx) const { return deg_[idx]; }
  // Index of e + unit(v); only valid when degree(idx) < dmax.
  size_t successor(size_t idx, int v) const { return succ_[static_cast<size_t>(v)][idx]; }

 private:
  long long binom(int n, int k) const;
  int r_ = 0, dmax_ = 0;
  size_t size_ = 1;
  std::vector<std::vector<long long>> binom_;
  std::vector<int> exps_;
  std::vector<int> deg_;
  std::vector<std::vector<size_t>> succ_;
};

class MomentTable {
 public:
  // Predicate on the exponent vector (in original variable order) selecting
  // which moments are materialized; all are when empty.
  using Keep = std::function<bool(const int*)>;

  MomentTable() = default;
  static MomentTable over_region(int nvars, const std::vector<IntegrationLimit>& limits,
                                 int max_degree, const Keep& keep = {});

  int nvars() const { return nvars_; }
  int max_degree() const { return max_degree_; }
  bool has(const int* e) const;
  Rational moment(const int* e) const;
  Rational moment(const Exponent& e) const { return moment(e.data()); }

  // Integer access for bulk contractions: for |e| <= top,
  // moment(e) = scaled_numerator(e, top) / common_denominator(top).
  Integer common_denominator(int top) const;
  void scaled_numerator(const int* e, int top, Integer& out) const;
  // Linear functional p -> int_R p; every monomial of p must be materialized.
  Rational integrate(const MultiPoly& p) const;

  // Adds another table over the same variables, degree and scaling.
  MomentTable& operator+=(const MomentTable& o);
  // Adds factor * o (for signed sums of pieces).
  void add_scaled(const MomentTable& o, long factor);

 private:
  int nvars_ = 0, max_degree_ = 0;
  long scale_ = 1;
  DegreeIndex index_;
  std::vector<Integer> num_;
  std::vector<char> kept_;
  Integer den_;
  std::vector<Integer> scale_pow_;
};

}  // namespace corrbound
