#include <doctest.h>

#include <random>

#include <json.hpp>

#include "corrbound/bound_solver.hpp"

using namespace corrbound;

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix exact_matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  Matrix a;
  for (const auto& r : rows) a.emplace_back(r.begin(), r.end());
  return a;
}

GramSystem poly_system(int d) {
  GramMeta meta;
  meta.d = d;
  return assemble_gram(meta);
}

}  // namespace

TEST_CASE("rank-one solve: small systems") {
  {
    const auto sol = solve_rank1(exact_matrix({{1, 0}, {0, 1}}), {Rational(1), Rational(0)});
    CHECK(sol.c[0].rational() == 1);
    CHECK(sol.c[1].rational() == 0);
    CHECK(quadratic_bound(exact_matrix({{1, 0}, {0, 1}}), {Rational(1), Rational(0)}, sol.c).rational() == 1);
  }
  const Matrix A = exact_matrix({{1, 0}, {0, 2}});
  const std::vector<Scalar> b{Rational(1), Rational(1)};
  const auto sol = solve_rank1(A, b);
  CHECK(sol.c[0].rational() == 1);
  CHECK(sol.c[1].rational() == Rational(1, 2));
  const Rational best = quadratic_bound(A, b, sol.c).rational();
  CHECK(best == Rational(2, 3));
  // Rank-one feasible X = v v^T / (v^T b)^2 on a grid never beats it.
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      if (i + j == 0) continue;
      const Scalar v = quadratic_bound(A, b, {Rational(i, 10), Rational(j, 10)});
      CHECK(v.rational() >= best);
    }
}

TEST_CASE("rank-one solve: dependent basis elements are dropped") {
  // Third row duplicates the first.
  const Matrix A = exact_matrix({{2, 1, 2}, {1, 3, 1}, {2, 1, 2}});
  const std::vector<Scalar> b{Rational(1), Rational(1), Rational(1)};
  const auto sol = solve_rank1(A, b);
  REQUIRE(sol.dropped.size() == 1);
  CHECK((sol.dropped[0] == 0 || sol.dropped[0] == 2));
  CHECK(quadratic_bound(A, b, sol.c).rational() == Rational(5, 3));

  // Interval entries: the dependent pivot's enclosure straddles 0.
  Matrix B;
  for (const auto& row : A) {
    std::vector<Scalar> r;
    for (const auto& x : row) {
      Interval v = x.to_interval(128);
      v.add_error(1e-20);
      r.emplace_back(v);
    }
    B.push_back(r);
  }
  const auto isol = solve_rank1(B, b, 128);
  CHECK(isol.dropped.size() == 1);

  CHECK_THROWS_AS(solve_rank1(exact_matrix({{1, 0}, {0, -1}}), {Rational(1), Rational(1)}), SingularSystemError);
  CHECK_THROWS_AS(solve_rank1(exact_matrix({{0, 0}, {0, 0}}), {Rational(1), Rational(1)}), SingularSystemError);
  CHECK_THROWS_AS(quadratic_bound(A, b, {Rational(1), Rational(0), Rational(-1)}), NormalizationError);
}

TEST_CASE("certificate: first table row") {
  const GramSystem sys = poly_system(10);
  const BoundCertificate cert = optimal_bound(sys);
  REQUIRE(cert.bound.is_exact());
  CHECK(decimal_up(cert.bound, 9) == "0.077516654");
  CHECK(cert.fraction.rational() == 1 - cert.bound.rational() / 2);
  CHECK(cert.dropped.empty());

  // Scale invariance is exact on the rational path.
  std::vector<Scalar> scaled;
  for (const auto& c : cert.c) scaled.emplace_back(Rational(-17, 5) * c.rational());
  CHECK(certify_bound(sys, scaled).bound.rational() == cert.bound.rational());

  // Optimality under perturbation.
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> noise(-1000, 1000);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Scalar> c;
    for (const auto& x : cert.c) c.emplace_back(x.rational() * (1 + Rational(noise(rng), 1000000000)));
    CHECK(certify_bound(sys, c).bound.rational() >= cert.bound.rational());
  }

  const auto j = nlohmann::json::parse(certificate_json(cert));
  CHECK(j["bound_upper_9"] == "0.077516654");
  CHECK(j["meta"]["parametrization"] == "poly");
  CHECK(j["c"].size() == sys.b.size());
}

TEST_CASE("certificate: interval path") {
  GramMeta meta;
  meta.param = Parametrization::shift;
  meta.d = 1;
  meta.prec = 128;
  meta.trunc = TruncationParams::make(3, 1, 40);
  const GramSystem sys = assemble_gram(meta, nullptr, 1);
  const BoundCertificate cert = optimal_bound(sys);
  CHECK(!cert.bound.is_exact());
  const Interval b = cert.bound.to_interval(128);
  CHECK(std::abs(b.mid_double() / 0.077710979 - 1) < 5e-4);

  std::vector<Scalar> scaled;
  for (const auto& c : cert.c) scaled.emplace_back(Rational(3, 7) * c.rational());
  CHECK(certify_bound(sys, scaled).bound.to_interval(128).overlaps(b));

  std::mt19937 rng(5);
  std::uniform_int_distribution<long> noise(-1000, 1000);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Scalar> c;
    for (const auto& x : cert.c) c.emplace_back(x.rational() * (1 + Rational(noise(rng), 100000)));
    const Interval p = certify_bound(sys, c).bound.to_interval(128);
    CHECK(p.mid_double() + p.rad() >= b.mid_double() - b.rad());
  }
}

TEST_CASE("fraction bound") {
  CHECK(decimal_down(fraction_bound(3, Scalar(Rational(77197284, 1000000000))), 4) == "0.9614");
  CHECK(decimal_down(fraction_bound(4, Scalar(Rational(447, 3500))), 4) == "0.9787");
  CHECK(fraction_bound(2, Scalar(Rational(0))).rational() == 1);
  const Scalar f = fraction_bound(3, Scalar(Interval(Rational(1, 3), 128)), 128);
  CHECK(f.to_interval(128).contains(Rational(5, 6)));
  CHECK_THROWS_AS(fraction_bound(1, Scalar(Rational(0))), std::invalid_argument);
}

TEST_CASE("directed decimals") {
  CHECK(decimal_up(Scalar(Rational(1, 3)), 4) == "0.3334");
  CHECK(decimal_down(Scalar(Rational(1, 3)), 4) == "0.3333");
  CHECK(decimal_up(Scalar(Rational(-1, 3)), 4) == "-0.3333");
  CHECK(decimal_down(Scalar(Rational(-1, 3)), 4) == "-0.3334");
  CHECK(decimal_up(Scalar(Rational(5)), 2) == "5.00");
}

TEST_CASE("bounds do not grow with the basis") {
  Rational prev = 1;
  for (int d : {0, 4, 8, 12}) {
    const Rational b = optimal_bound(poly_system(d)).bound.rational();
    CHECK(b <= prev);
    prev = b;
  }
}
