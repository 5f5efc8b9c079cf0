#include <doctest.h>

#include <random>

#include "corrbound/polytope_fourier.hpp"
#include "corrbound/symmetry.hpp"
#include "support/polytope_oracle.hpp"

using namespace corrbound;

namespace {

std::vector<Scalar> point(std::initializer_list<Rational> q) { return {q.begin(), q.end()}; }

oracle::Vec as_doubles(const std::vector<Scalar>& y) {
  oracle::Vec v;
  for (const auto& s : y) v.push_back(s.rational().get_d());
  return v;
}

bool near(const Interval& x, double expect, double tol) {
  return x.rad() < tol && std::abs(x.mid_double() - expect) <= tol;
}

Rational factorial_of(int n) { return factorial(static_cast<unsigned>(n)); }

}  // namespace

TEST_CASE("triangulation oracle volumes") {
  CHECK(oracle::volume(oracle::polytope_h(3)) == Rational(3, 4));
  CHECK(oracle::volume(oracle::polytope_h(4)) == Rational(5, 12));
  CHECK(oracle::volume(oracle::polytope_h(2)) == Rational(1));
  for (int n = 1; n <= 4; ++n) CHECK(oracle::volume(oracle::cross_polytope(n)) == pow(Rational(2), n) / factorial_of(n));
}

TEST_CASE("transform of H at the origin is the volume") {
  CHECK(ft_H(3, 1, point({0, 0})).contains(Rational(3, 4)));
  CHECK(ft_H(4, 1, point({0, 0, 0})).contains(Rational(5, 12)));
  CHECK(ft_H(2, 1, point({0})).contains(Rational(1)));
  Interval scaled = ft_H(3, Rational(1, 2), point({0, 0}));
  CHECK(scaled.contains(Rational(3, 16)));
  CHECK(scaled.rad() < 1e-60);
}

TEST_CASE("cross-polytope volume identity") {
  for (int n = 1; n <= 5; ++n) {
    std::vector<Scalar> zero(static_cast<size_t>(n), Scalar(0));
    Interval v = ft_cross_polytope(n, zero);
    CHECK(v.contains(pow(Rational(2), n) / factorial_of(n)));
    CHECK(v.rad() < 1e-50);
  }
}

TEST_CASE("one-dimensional examples") {
  CHECK(ft_cross_polytope(1, point({Rational(1, 4)})).contains(Rational(0)) == false);
  Interval c = ft_cross_polytope(1, point({Rational(1, 4)}));
  CHECK(near(c, 4 / M_PI, 1e-15));
  ComplexInterval s = ft_simplex(1, point({Rational(1, 4)}));
  // int_0^1 exp(-pi i x / 2) dx = (2/pi)(1 - i)
  CHECK(near(s.re, 2 / M_PI, 1e-15));
  CHECK(near(s.im, -2 / M_PI, 1e-15));
  auto q = oracle::transform(oracle::standard_simplex(1), {0.25});
  CHECK(std::abs(q.real() - s.re.mid_double()) < 1e-12);
  CHECK(std::abs(q.imag() - s.im.mid_double()) < 1e-12);
  // Volume of S_1 at y -> 0: the sine-squared part vanishes and the
  // sin(2 pi y) part tends to 1, which the (-i)^n rotation makes real.
  CHECK(limit_formula(simplex_real_part_formula(1), {Rational(0)}, 128).contains(Rational(0)));
  CHECK(limit_formula(simplex_imag_part_formula(1), {Rational(0)}, 128).contains(Rational(1)));
}

TEST_CASE("simplex and cross-polytope against quadrature") {
  auto y = point({Rational(1, 3), Rational(1, 7)});
  ComplexInterval s = ft_simplex(2, y);
  auto q = oracle::transform(oracle::standard_simplex(2), as_doubles(y));
  CHECK(std::abs(q.real() - s.re.mid_double()) < 1e-8);
  CHECK(std::abs(q.imag() - s.im.mid_double()) < 1e-8);
  auto z = point({Rational(1, 3), Rational(1, 5)});
  auto qc = oracle::transform(oracle::cross_polytope(2), as_doubles(z));
  CHECK(std::abs(qc.real() - ft_cross_polytope(2, z).mid_double()) < 1e-8);
  CHECK(std::abs(qc.imag()) < 1e-12);
  auto w = point({Rational(2, 5), Rational(-3, 7), Rational(5, 9)});
  auto q3 = oracle::transform(oracle::standard_simplex(3), as_doubles(w));
  ComplexInterval s3 = ft_simplex(3, w);
  CHECK(std::abs(q3.real() - s3.re.mid_double()) < 1e-8);
  CHECK(std::abs(q3.imag() - s3.im.mid_double()) < 1e-8);
  CHECK_THROWS_AS(ft_simplex(2, point({Rational(1, 3), Rational(1, 3)})), SingularInputError);
}

TEST_CASE("H transform against quadrature at random rational points") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> num(-240, 240);
  for (int n : {3, 4}) {
    auto tri = oracle::polytope_h(n);
    int checked = 0;
    while (checked < 20) {
      std::vector<Scalar> y;
      for (int i = 0; i < n - 1; ++i) y.emplace_back(ratio(num(rng), 97));
      if (singular_pattern(y).any()) continue;
      Interval v = ft_H(n, 1, y);
      auto q = oracle::transform(tri, as_doubles(y), 28);
      CHECK(v.rad() < 1e-30);
      CHECK(std::abs(q.real() - v.mid_double()) < 1e-6);
      CHECK(std::abs(q.imag()) < 1e-9);
      ++checked;
    }
  }
  auto y = point({Rational(1, 3), Rational(1, 7)});
  auto q = oracle::transform(oracle::polytope_h(3), as_doubles(y));
  CHECK(std::abs(q.real() - ft_H(3, 1, y).mid_double()) < 1e-8);
}

TEST_CASE("enclosure arguments use the interval path") {
  Interval a = Interval(Rational(1, 3), 128), b = Interval(Rational(1, 7), 128);
  a.add_error(1e-30);
  Interval v = ft_H(3, 1, {Scalar(a), Scalar(b)});
  Interval exact = ft_H(3, 1, point({Rational(1, 3), Rational(1, 7)}), 128);
  CHECK(v.overlaps(exact));
  Interval z(128);
  z.add_error(1e-20);
  CHECK_THROWS_AS(ft_H(3, 1, {Scalar(z), Scalar(b)}), SingularInputError);
}

TEST_CASE("H transform is invariant under the symmetry group") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-50, 50);
  for (int n : {3, 4}) {
    Group gamma = build_gamma(n);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Rational> y;
      for (int i = 0; i < n - 1; ++i) y.push_back(ratio(num(rng), 23));
      std::vector<Scalar> ys(y.begin(), y.end());
      Interval base = ft_H(n, 1, ys);
      for (const auto& g : gamma.elements()) {
        std::vector<Scalar> gy;
        for (int r = 0; r < n - 1; ++r) {
          Rational acc = 0;
          for (int c = 0; c < n - 1; ++c) acc += g(r, c) * y[static_cast<size_t>(c)];
          gy.emplace_back(acc);
        }
        CHECK(ft_H(n, 1, gy).overlaps(base));
      }
    }
  }
}

TEST_CASE("simplex route gives a real H-type transform") {
  // chi_C(y) of the centrally symmetric cross-polytope is the sum of the
  // orthant-simplex transforms; their imaginary parts cancel.
  auto y = point({Rational(2, 9), Rational(3, 11)});
  Interval im(256), re(256);
  for (int sx : {1, -1})
    for (int sy : {1, -1}) {
      ComplexInterval t = ft_simplex(2, {Scalar(Rational(sx)) * y[0], Scalar(Rational(sy)) * y[1]});
      re += t.re;
      im += t.im;
    }
  CHECK(im.contains_zero());
  CHECK(re.overlaps(ft_cross_polytope(2, y)));
}

TEST_CASE("singular limits agree with nearby evaluations") {
  struct Case {
    int n;
    std::vector<Rational> y;
  };
  const std::vector<Case> cases{
      {3, {2, 2}},   {3, {1, 0}},    {3, {0, 0}},   {3, {Rational(1, 2), Rational(1, 2)}},
      {3, {-1, 1}},  {4, {0, 0, 0}}, {4, {1, 1, 0}}, {4, {2, -1, 2}},
      {4, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}},
  };
  for (const auto& c : cases) {
    std::vector<Scalar> ys(c.y.begin(), c.y.end());
    Interval limit = ft_H(c.n, 1, ys);
    Interval direct = ft_H_singular_limit(c.n, 1, c.y, singular_pattern(ys));
    CHECK(limit.overlaps(direct));
    CHECK(limit.rad() < 1e-40);
    // Symmetric bracket y +- eps v along a generic direction.
    for (double eps : {1e-6, 1e-8}) {
      Rational e(static_cast<long>(std::llround(1 / eps)));
      e = 1 / e;
      std::vector<Scalar> up, down;
      for (size_t i = 0; i < c.y.size(); ++i) {
        Rational v = ratio(static_cast<long>(3 * i + 1), 7);
        up.emplace_back(c.y[i] + e * v);
        down.emplace_back(c.y[i] - e * v);
      }
      Interval mean = (ft_H(c.n, 1, up) + ft_H(c.n, 1, down)) / Interval(2L, 256);
      CHECK(std::abs(mean.mid_double() - limit.mid_double()) < 1e-8);
    }
    auto q = oracle::transform(oracle::polytope_h(c.n), [&] {
      oracle::Vec v;
      for (const auto& r : c.y) v.push_back(r.get_d());
      return v;
    }());
    CHECK(std::abs(q.real() - limit.mid_double()) < 1e-6);
  }
}

TEST_CASE("limit errors") {
  CHECK_THROWS_AS(ft_H(4, 1, point({0, 0, 0}), 256, 1), ExpansionCapError);
  // A formula whose pole cannot cancel: 1/y at y = 0.
  TermFormula bad;
  bad.dim = 1;
  bad.terms.push_back({Rational(1), {}, {{LinearForm{1}, -1}}});
  CHECK_THROWS_AS(limit_formula(bad, {Rational(0)}, 128), NonCancellationError);
  SingularPattern wrong;
  CHECK_THROWS_AS(ft_H_singular_limit(3, 1, {Rational(0), Rational(1)}, wrong), std::invalid_argument);
}
