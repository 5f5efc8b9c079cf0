// Exact Gram entries for the polynomial parametrization at (n, m) = (3, 1).
//
// With hat g = p 1_H and hat g' = p' 1_H, the transform of the product is the
// convolution
//     G(v) = int_{H cap (H + v)} p(x) p'(x - v) dx,
// and
//     nu_3(g g') = 2 g(0) g'(0) + G(0) + 6 int_0^1 G(-u, u) (u - 1) du
//                  - 12 int_0^1 int_{-u_2}^0 G(u_1, u_2) u_2 du_1 du_2.
// The two outer integrals run over polytopes in (x, u) space, split below
// into pieces with affine limits.

#include <numeric>

#include "corrbound/arith/moments.hpp"
#include "corrbound/correlation_functionals.hpp"

namespace corrbound {

namespace {

using Terms = std::vector<std::pair<int, Rational>>;
const Rational kHalf(1, 2);

IntegrationLimit lim(int nv, int var, const Rational& lo, const Terms& lo_t, const Rational& hi, const Terms& hi_t) {
  return make_limit(nv, var, lo, lo_t, hi, hi_t);
}

using Region = std::vector<IntegrationLimit>;  // innermost first

// H = hexagon |x1| + |x2| + |x1 + x2| <= 1 in (x1, x2).
std::vector<Region> hexagon_pieces() {
  return {
      {lim(2, 0, -kHalf, {{1, -1}}, kHalf, {}), lim(2, 1, -kHalf, {}, 0, {})},
      {lim(2, 0, -kHalf, {}, kHalf, {{1, -1}}), lim(2, 1, 0, {}, kHalf, {})},
  };
}

// (x1, x2, u) with x in H cap (H + (-u, u)), u in [0, 1].
std::vector<Region> diagonal_pieces() {
  const int nv = 3;
  return {
      {lim(nv, 0, -kHalf, {{1, -1}}, kHalf, {{2, -1}}), lim(nv, 1, -kHalf, {{2, 1}}, 0, {}),
       lim(nv, 2, 0, {}, kHalf, {})},
      {lim(nv, 0, -kHalf, {}, kHalf, {{2, -1}}), lim(nv, 1, 0, {}, 0, {{2, 1}}), lim(nv, 2, 0, {}, kHalf, {})},
      {lim(nv, 0, -kHalf, {}, kHalf, {{1, -1}}), lim(nv, 1, 0, {{2, 1}}, kHalf, {}), lim(nv, 2, 0, {}, kHalf, {})},
      {lim(nv, 0, -kHalf, {}, kHalf, {{2, -1}}), lim(nv, 1, -kHalf, {{2, 1}}, kHalf, {}),
       lim(nv, 2, kHalf, {}, 1, {})},
  };
}

// (x1, x2, u1, u2) with x in H cap (H + u), u2 in [0, 1], u1 in [-u2, 0].
std::vector<Region> wedge_pieces() {
  const int nv = 4;
  const int x1 = 0, x2 = 1, u1 = 2, u2 = 3;
  // Lower bound u1 + u2 - x2 - 1/2 of x1, used by several pieces.
  const Terms slant{{u1, 1}, {u2, 1}, {x2, -1}};
  std::vector<Region> r;
  // u2 in [1/2, 1], u1 in [-u2, -1/2]
  r.push_back({lim(nv, x1, -kHalf, {}, kHalf, {{u1, 1}}), lim(nv, x2, -kHalf, {{u2, 1}}, kHalf, {}),
               lim(nv, u1, 0, {{u2, -1}}, -kHalf, {}), lim(nv, u2, kHalf, {}, 1, {})});
  // u2 in [1/2, 1], u1 in [1/2 - u2, 0]
  r.push_back({lim(nv, x1, -kHalf, slant, kHalf, {{x2, -1}}), lim(nv, x2, -kHalf, {{u2, 1}}, kHalf, {}),
               lim(nv, u1, kHalf, {{u2, -1}}, 0, {}), lim(nv, u2, kHalf, {}, 1, {})});
  // u1 in [-1/2, 0], u2 in [-2 u1, 1/2 - u1]
  const IntegrationLimit u2_upper = lim(nv, u2, 0, {{u1, -2}}, kHalf, {{u1, -1}});
  const IntegrationLimit u1_range = lim(nv, u1, -kHalf, {}, 0, {});
  r.push_back({lim(nv, x1, -kHalf, {}, kHalf, {{x2, -1}}), lim(nv, x2, 0, {{u1, 1}, {u2, 1}}, kHalf, {}), u2_upper,
               u1_range});
  r.push_back({lim(nv, x1, -kHalf, slant, kHalf, {{x2, -1}}), lim(nv, x2, 0, {{u1, -1}}, 0, {{u1, 1}, {u2, 1}}),
               u2_upper, u1_range});
  r.push_back({lim(nv, x1, -kHalf, slant, kHalf, {{u1, 1}}), lim(nv, x2, -kHalf, {{u2, 1}}, 0, {{u1, -1}}), u2_upper,
               u1_range});
  // u1 in [-1/2, 0], u2 in [-u1, -2 u1]
  const IntegrationLimit u2_lower = lim(nv, u2, 0, {{u1, -1}}, 0, {{u1, -2}});
  r.push_back({lim(nv, x1, -kHalf, {}, kHalf, {{x2, -1}}), lim(nv, x2, 0, {{u1, -1}}, kHalf, {}), u2_lower,
               u1_range});
  r.push_back({lim(nv, x1, -kHalf, {}, kHalf, {{u1, 1}}), lim(nv, x2, 0, {{u1, 1}, {u2, 1}}, 0, {{u1, -1}}), u2_lower,
               u1_range});
  r.push_back({lim(nv, x1, -kHalf, slant, kHalf, {{u1, 1}}), lim(nv, x2, -kHalf, {{u2, 1}}, 0, {{u1, 1}, {u2, 1}}),
               u2_lower, u1_range});
  return r;
}

// p(images[0], images[1], ...) with images over a larger variable set.
MultiPoly compose(const MultiPoly& p, const std::vector<MultiPoly>& images, int nv) {
  std::vector<std::vector<MultiPoly>> powers(images.size());
  MultiPoly out(nv);
  for (const auto& [e, c] : p.terms()) {
    MultiPoly t = MultiPoly::constant(nv, c);
    for (size_t v = 0; v < images.size(); ++v) {
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(MultiPoly::constant(nv, 1));
      while (static_cast<int>(pw.size()) <= e[v]) pw.push_back(pw.back() * images[v]);
      if (e[v] > 0) t = t * pw[static_cast<size_t>(e[v])];
    }
    out += t;
  }
  return out;
}

MultiPoly embed(const MultiPoly& p, int nv) {
  MultiPoly out(nv);
  for (const auto& [e, c] : p.terms()) {
    Exponent f(static_cast<size_t>(nv), 0);
    std::copy(e.begin(), e.end(), f.begin());
    out.add_term(f, c);
  }
  return out;
}

MultiPoly var(int nv, int i, long sign = 1) { return Rational(sign) * MultiPoly::variable(nv, i); }

// p(x - v(u)) * weight(u) in the variables of the region.
MultiPoly shifted_integrand(const MultiPoly& p, int nv) {
  switch (nv) {
    case 2:
      return p;
    case 3:  // v = (-u, u), weight u - 1
      return compose(p, {var(3, 0) + var(3, 2), var(3, 1) - var(3, 2)}, 3) *
             (var(3, 2) - MultiPoly::constant(3, 1));
    case 4:  // v = (u1, u2), weight u2
      return compose(p, {var(4, 0) - var(4, 2), var(4, 1) - var(4, 3)}, 4) * var(4, 3);
    default:
      throw std::logic_error("unsupported region dimension");
  }
}

MomentTable table_over(const std::vector<Region>& pieces, int nv, int degree, const MomentTable::Keep& keep) {
  MomentTable t;
  for (const auto& r : pieces) t += MomentTable::over_region(nv, r, degree, keep);
  return t;
}

// M[i][j] = int p_i(x) q_j(x, u) over the table's region, for all i, j.
std::vector<std::vector<Rational>> contract(const MomentTable& t, const std::vector<MultiPoly>& basis, int d) {
  const int nv = t.nvars();
  const int top = t.max_degree();
  DegreeIndex idx(nv, top, false);
  std::vector<Integer> scaled(idx.size());
  std::vector<char> present(idx.size(), 0);
  for (size_t k = 0; k < idx.size(); ++k) {
    if (!t.has(idx.exponent(k))) continue;
    t.scaled_numerator(idx.exponent(k), top, scaled[k]);
    present[k] = 1;
  }
  const Integer den = t.common_denominator(top);

  // x-monomials of degree <= d.
  std::vector<Exponent> xmon;
  for (int tot = 0; tot <= d; ++tot)
    for (int a = tot; a >= 0; --a) xmon.push_back({a, tot - a});

  const size_t nb = basis.size();
  std::vector<std::vector<Rational>> out(nb, std::vector<Rational>(nb, 0));
  std::vector<int> e(static_cast<size_t>(nv));
  Integer acc;
  for (size_t j = 0; j < nb; ++j) {
    const MultiPoly q = shifted_integrand(embed(basis[j], nv), nv);
    Integer l = 1;
    for (const auto& [ex, c] : q.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<std::pair<Exponent, Integer>> iq;
    for (const auto& [ex, c] : q.terms()) iq.emplace_back(ex, Integer(c * l));
    const Integer scale = l * den;
    std::vector<Rational> v(xmon.size());
    for (size_t a = 0; a < xmon.size(); ++a) {
      acc = 0;
      for (const auto& [ex, c] : iq) {
        for (int k = 0; k < nv; ++k) e[static_cast<size_t>(k)] = ex[static_cast<size_t>(k)];
        e[0] += xmon[a][0];
        e[1] += xmon[a][1];
        const size_t k = idx.index(e.data());
        if (!present[k]) throw std::logic_error("moment outside the materialized range");
        mpz_addmul(acc.get_mpz_t(), c.get_mpz_t(), scaled[k].get_mpz_t());
      }
      v[a] = ratio(acc, scale);
    }
    for (size_t i = 0; i < nb; ++i) {
      Rational s = 0;
      for (size_t a = 0; a < xmon.size(); ++a) {
        Rational c = basis[i].coefficient(xmon[a]);
        if (c != 0) s += c * v[a];
      }
      out[i][j] = s;
    }
  }
  return out;
}

int max_degree_of(const std::vector<MultiPoly>& basis) {
  int d = 0;
  for (const auto& p : basis) d = std::max(d, p.degree());
  return d;
}

void check_basis(const std::vector<MultiPoly>& basis) {
  for (const auto& p : basis)
    if (p.nvars() != 2) throw std::invalid_argument("polynomial path needs polynomials in 2 variables");
}

Rational integrate_pieces(const MultiPoly& f, const std::vector<Region>& pieces) {
  Rational s = 0;
  for (const auto& r : pieces) s += poly_integrate_iterated(f, r).constant_term();
  return s;
}

}  // namespace

std::vector<Rational> b_poly(const std::vector<MultiPoly>& basis) {
  check_basis(basis);
  std::vector<Rational> b;
  for (const auto& p : basis) b.push_back(integrate_pieces(p, hexagon_pieces()));
  return b;
}

Rational nu3_poly(const MultiPoly& p, const MultiPoly& q) {
  check_basis({p, q});
  const Rational bp = integrate_pieces(p, hexagon_pieces()), bq = integrate_pieces(q, hexagon_pieces());
  const Rational g0 = integrate_pieces(p * q, hexagon_pieces());
  const Rational diag = integrate_pieces(embed(p, 3) * shifted_integrand(embed(q, 3), 3), diagonal_pieces());
  const Rational wedge = integrate_pieces(embed(p, 4) * shifted_integrand(embed(q, 4), 4), wedge_pieces());
  return 2 * bp * bq + g0 + 6 * diag - 12 * wedge;
}

ExactGram poly_gram(const std::vector<MultiPoly>& basis) {
  check_basis(basis);
  const int d = max_degree_of(basis);
  ExactGram g;
  const size_t nb = basis.size();

  MomentTable hex = table_over(hexagon_pieces(), 2, 2 * d, {});
  for (const auto& p : basis) g.b.push_back(hex.integrate(p));
  auto g0 = contract(hex, basis, d);

  // Moments x^a u^c with |a| <= 2d and |c| <= d + 1 (the weight adds one).
  auto keep3 = [d](const int* e) { return e[0] + e[1] <= 2 * d && e[2] <= d + 1; };
  auto keep4 = [d](const int* e) { return e[0] + e[1] <= 2 * d && e[2] + e[3] <= d + 1; };
  auto diag = contract(table_over(diagonal_pieces(), 3, 3 * d + 1, keep3), basis, d);
  auto wedge = contract(table_over(wedge_pieces(), 4, 3 * d + 1, keep4), basis, d);

  g.A.assign(nb, std::vector<Rational>(nb, 0));
  for (size_t i = 0; i < nb; ++i)
    for (size_t j = 0; j < nb; ++j)
      g.A[i][j] = 2 * g.b[i] * g.b[j] + g0[i][j] + 6 * diag[i][j] - 12 * wedge[i][j];
  return g;
}

}  // namespace corrbound
