#include <doctest.h>

#include <algorithm>
#include <set>

#include "corrbound/symmetry.hpp"

using namespace corrbound;

namespace {

std::vector<long> act_on(const IntMatrix& g, const std::vector<long>& v) {
  std::vector<long> out(v.size(), 0);
  for (size_t r = 0; r < v.size(); ++r)
    for (size_t c = 0; c < v.size(); ++c) out[r] += g(static_cast<int>(r), static_cast<int>(c)) * v[c];
  return out;
}

MultiPoly x(int i) { return MultiPoly::variable(2, i); }

}  // namespace

TEST_CASE("group orders and basic elements") {
  Group g3 = build_gamma(3), g4 = build_gamma(4);
  CHECK(g3.order() == 12);
  CHECK(g4.order() == 48);
  CHECK(build_gamma(2).order() == 2);
  for (Group* g : {&g3, &g4}) {
    const int k = g->dim();
    IntMatrix minus = IntMatrix::identity(k);
    for (int i = 0; i < k; ++i) minus(i, i) = -1;
    CHECK_NOTHROW(g->index_of(IntMatrix::identity(k)));
    CHECK_NOTHROW(g->index_of(minus));
  }
  // An element of order 6 (the hexagon rotation).
  bool has_order_six = false;
  for (const auto& e : g3.elements()) {
    IntMatrix p = e;
    int order = 1;
    while (!(p == IntMatrix::identity(2))) {
      p = p * e;
      ++order;
    }
    has_order_six = has_order_six || order == 6;
  }
  CHECK(has_order_six);
  CHECK_THROWS_AS(build_gamma(4, 10), GroupClosureError);
}

TEST_CASE("group is closed and transposes permute the vertices") {
  for (int n : {3, 4}) {
    Group g = build_gamma(n);
    auto verts = polytope_vertices_doubled(n);
    std::set<std::vector<long>> vset(verts.begin(), verts.end());
    for (size_t i = 0; i < g.order(); ++i) {
      IntMatrix t = g.element(i).transposed();
      std::set<std::vector<long>> image;
      for (const auto& v : verts) image.insert(act_on(t, v));
      CHECK(image == vset);
      CHECK(g.product(i, g.inverse(i)) == g.index_of(IntMatrix::identity(n - 1)));
      for (size_t j = 0; j < g.order(); ++j) CHECK_NOTHROW(g.index_of(g.element(i) * g.element(j)));
    }
  }
}

TEST_CASE("standard representations are homomorphisms") {
  for (int n : {3, 4}) {
    Group g = build_gamma(n);
    for (const auto& rep : standard_representations(g)) {
      INFO(rep.name);
      CHECK(is_homomorphism(g, rep));
    }
  }
}

TEST_CASE("symmetrization examples") {
  Group sym = build_gamma(3).transposed();
  CHECK(poly_symmetrize(MultiPoly::constant(2, 1), sym.elements()) == MultiPoly::constant(2, 1));
  CHECK(poly_symmetrize(x(0), sym.elements()).is_zero());
  MultiPoly q = poly_symmetrize(x(0) * x(0), sym.elements());
  for (const auto& g : sym.elements()) CHECK(q.compose_linear(g) == q);
  CHECK(poly_symmetrize(q, sym.elements()) == q);
}

TEST_CASE("projection operators are idempotent") {
  Group g = build_gamma(3);
  auto reps = standard_representations(g);
  MultiPoly f = x(0) * x(0) * x(1) + Rational(3) * x(1) * x(1) * x(1) * x(1) + x(0) - Rational(2, 3) * x(0) * x(1);
  for (const auto& rep : reps) {
    INFO(rep.name);
    auto p = ProjectionOperator<PolynomialAction>(g, rep, 0, 0);
    MultiPoly once = p(f);
    CHECK(p(once) == once);
  }
  ShiftFunction s{{{1, 0}, Rational(2)}, {{2, -1}, Rational(-1, 3)}, {{0, 0}, Rational(5)}};
  for (const auto& rep : reps) {
    auto p = ProjectionOperator<ShiftAction>(g, rep, 0, 0);
    ShiftFunction once = p(s);
    CHECK(p(once) == once);
  }
  // Trivial representation: the group average.
  MultiPoly avg = projection_operator(g, reps[0], 0, 0)(f);
  CHECK(avg == poly_symmetrize(f, g.elements()));
}

TEST_CASE("symmetry adapted functions vanish at the origin") {
  // g_{pi,j,1} = p_{j,1} p_{1,1} f; evaluated at 0, a shift combination
  // sum c_lambda g_lambda contributes sum c_lambda chi(-lambda), which
  // depends on lambda only through its orbit, so the adapted sum is
  // zero whenever the representation is nontrivial.
  for (int n : {3, 4}) {
    Group g = build_gamma(n);
    auto reps = standard_representations(g);
    auto orbits = invariant_shift_basis(n, 1, 3);
    std::map<std::vector<long>, size_t> orbit_of;
    for (size_t o = 0; o < orbits.size(); ++o)
      for (const auto& mu : orbits[o].members) orbit_of[mu] = o;
    ShiftFunction f;
    long c = 1;
    for (const auto& [mu, o] : orbit_of) f[mu] = ratio(c++ % 7 - 3, 5);
    for (const auto& rep : reps) {
      if (rep.name == "trivial") continue;
      for (int j = 0; j < rep.dim; ++j) {
        auto first = ProjectionOperator<ShiftAction>(g, rep, 0, 0);
        auto second = ProjectionOperator<ShiftAction>(g, rep, j, 0);
        ShiftFunction adapted = second(first(f));
        // Value at the origin as a formal combination of orbit values.
        std::vector<Rational> per_orbit(orbits.size(), 0);
        for (const auto& [mu, v] : adapted) per_orbit[orbit_of.at(mu)] += v;
        for (const auto& v : per_orbit) CHECK(v == 0);
      }
    }
  }
}

TEST_CASE("invariant polynomial basis sizes") {
  CHECK(invariant_poly_basis(3, 0).size() == 1);
  CHECK(invariant_poly_basis(3, 1).size() == 1);
  auto b2 = invariant_poly_basis(3, 2);
  CHECK(b2.size() == 2);
  CHECK(b2[1].degree() == 2);
  CHECK(invariant_poly_basis(3, 10).size() == 9);
  CHECK(invariant_poly_basis(3, 20).size() == 26);
  Group sym = build_gamma(3).transposed();
  for (const auto& p : invariant_poly_basis(3, 8))
    for (const auto& g : sym.elements()) CHECK(p.compose_linear(g) == p);
}

TEST_CASE("shift orbits") {
  auto d0 = invariant_shift_basis(3, 1, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].representative == std::vector<long>{0, 0});
  auto d1 = invariant_shift_basis(3, 1, 1);
  // {0} and the four unit vectors; the latter lie in one orbit, which is
  // closed up with +-(1,-1) from outside the l1 ball.
  REQUIRE(d1.size() == 2);
  CHECK(d1[0].members.size() == 1);
  CHECK(d1[1].members.size() == 6);
  Group g = build_gamma(3);
  for (const auto& o : invariant_shift_basis(3, 1, 4)) {
    std::set<std::vector<long>> members(o.members.begin(), o.members.end());
    for (const auto& mu : o.members)
      for (const auto& e : g.elements()) {
        CHECK(members.count(act_on(e, mu)) == 1);
      }
  }
}
