#pragma once

// Lattice symmetries of the polytope H_{n-1} = { x in R^{n-1} : |x|_1 + |sum x| <= 1 }.
//
// Sym(H) consists of the maps +-A_sigma, where A_sigma permutes the
// coordinates of the embedding (x, -sum x) in R^n and keeps the first n-1.
// Gamma is the group of transposes of Sym(H); it acts on lattice shifts, and
// the transform of H satisfies chi_H(g z) = chi_H(z) for g in Gamma.

#include <map>
#include <string>
#include <vector>

#include "corrbound/arith/multipoly.hpp"
#include "corrbound/arith/rational.hpp"

namespace corrbound {

class GroupClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Group {
 public:
  int n() const { return n_; }
  int dim() const { return n_ - 1; }
  size_t order() const { return elements_.size(); }
  const std::vector<IntMatrix>& elements() const { return elements_; }
  const IntMatrix& element(size_t i) const { return elements_[i]; }
  size_t index_of(const IntMatrix& g) const;
  size_t inverse(size_t i) const { return inverse_[i]; }
  size_t product(size_t i, size_t j) const;
  // Labels of the element written as eps * (coordinate permutation).
  int eps(size_t i) const { return eps_[i]; }
  int perm_sign(size_t i) const { return perm_sign_[i]; }
  // The group of transposed matrices (Sym(H) when this is Gamma).
  Group transposed() const;

  friend Group build_gamma(int n, size_t cap);

 private:
  void finalize();
  int n_ = 0;
  std::vector<IntMatrix> elements_;
  std::map<IntMatrix, size_t> lookup_;
  std::vector<size_t> inverse_;
  std::vector<int> eps_, perm_sign_;
};

// Gamma_n for 2 <= n <= 4, closed under multiplication from the permutation
// generators and -I. Every element's transpose is checked to permute the
// vertex set of H_{n-1}.
Group build_gamma(int n, size_t cap = 100000);

// Vertices of H_{n-1}, doubled so that they are integral: e_i - e_j with the
// last coordinate dropped.
std::vector<std::vector<long>> polytope_vertices_doubled(int n);

// Real matrix representation indexed like the group elements.
struct Representation {
  std::string name;
  int dim = 1;
  std::vector<std::vector<Rational>> matrices;  // dim*dim, row-major
  const Rational& entry(size_t g, int r, int c) const {
    return matrices[g][static_cast<size_t>(r * dim + c)];
  }
};

// trivial, eps, sign, eps*sign (all 1-dimensional), natural (g -> g) and
// eps*natural (both (n-1)-dimensional and irreducible).
std::vector<Representation> standard_representations(const Group& g);
bool is_homomorphism(const Group& g, const Representation& rep);

// Finite combination of translates g_lambda, keyed by lambda.
using ShiftFunction = std::map<std::vector<long>, Rational>;

// L(g) p(x) = p(g^{-1} x) on polynomials.
struct PolynomialAction {
  MultiPoly operator()(const Group& g, size_t i, const MultiPoly& p) const;
  static MultiPoly zero(const MultiPoly& like) { return MultiPoly(like.nvars()); }
};

// L(g) g_lambda = g_{g lambda} on shift functions.
struct ShiftAction {
  ShiftFunction operator()(const Group& g, size_t i, const ShiftFunction& f) const;
  static ShiftFunction zero(const ShiftFunction&) { return {}; }
};

// p_{j,j'} f = (dim / |G|) sum_g rep(g^{-1})_{j,j'} L(g) f.
template <class Action>
class ProjectionOperator {
 public:
  ProjectionOperator(const Group& g, const Representation& rep, int j, int jp)
      : group_(g), rep_(rep), j_(j), jp_(jp) {}

  template <class F>
  F operator()(const F& f) const {
    Action act;
    F out = Action::zero(f);
    const Rational scale = ratio(rep_.dim, static_cast<long>(group_.order()));
    for (size_t i = 0; i < group_.order(); ++i) {
      Rational c = rep_.entry(group_.inverse(i), j_, jp_);
      if (c == 0) continue;
      accumulate(out, act(group_, i, f), scale * c);
    }
    return out;
  }

 private:
  static void accumulate(MultiPoly& out, const MultiPoly& p, const Rational& c) { out += c * p; }
  static void accumulate(ShiftFunction& out, const ShiftFunction& f, const Rational& c) {
    for (const auto& [k, v] : f) {
      Rational& slot = out[k];
      slot += c * v;
      if (slot == 0) out.erase(k);
    }
  }
  const Group& group_;
  const Representation& rep_;
  int j_, jp_;
};

ProjectionOperator<PolynomialAction> projection_operator(const Group& g, const Representation& rep, int j,
                                                         int jp);

// Basis of Sym(H)-invariant polynomials of degree <= d in n-1 variables:
// Reynolds images of monomials in graded order, keeping those that raise the
// rank (decided exactly).
std::vector<MultiPoly> invariant_poly_basis(int n, int d);

// Gamma-orbit of lattice points mu (shift lambda = m * mu).
struct ShiftOrbit {
  std::vector<long> representative;
  std::vector<std::vector<long>> members;
};

// Orbits of Gamma on { mu in Z^{n-1} : |mu|_1 <= d }, ordered by the
// representative (smallest |mu|_1, then lexicographic).
std::vector<ShiftOrbit> invariant_shift_basis(int n, int m, int d);

}  // namespace corrbound
