#include <doctest.h>

#include <random>

#include "corrbound/kernel_n2.hpp"
#include "support/polytope_oracle.hpp"

using namespace corrbound;

TEST_CASE("K(0,0) closed form") {
  const Interval c = c2(1, 256);
  CHECK(c.rad() < 1e-60);
  CHECK(std::abs(c.mid_double() - 0.3274992963205884) < 1e-15);
  for (int m = 1; m <= 10; ++m) CHECK(k00(m).is_positive());
  // c_{2,m} = m - 1 + 1/(3m) + o(1/m).
  CHECK(std::abs(c2(100).mid_double() - (99 + 1.0 / 300)) < 1e-3);
  CHECK(c2(2).mid_double() > c2(1).mid_double());

  // Two precisions agree to 30 digits.
  const Interval lo = c2(1, 128), hi = c2(1, 512);
  CHECK(lo.overlaps(hi));
  auto digits = [](const Interval& x) {
    const std::string s = x.to_string(30);
    return s.substr(0, s.find(' '));
  };
  CHECK(digits(lo) == digits(hi));
  CHECK(lo.rad() < 1e-32);
}

TEST_CASE("kernel values") {
  for (int m : {1, 2, 5}) {
    const Interval k = kernel2_eval(m, Rational(0), Rational(0));
    CHECK(k.overlaps(k00(m)));
    CHECK(k.rad() < 1e-60);
  }
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> num(-300, 300);
  for (int rep = 0; rep < 20; ++rep) {
    const Rational x = ratio(num(rng), 37), y = ratio(num(rng), 41);
    const Interval a = kernel2_eval(1, x, y), b = kernel2_eval(1, y, x);
    CHECK(a.overlaps(b));
    CHECK(a.rad() < 1e-50);
  }
}

TEST_CASE("kernel is continuous across the removable points") {
  for (int m : {1, 3}) {
    const Kernel2Params p = Kernel2Params::make(m, 256);
    const Interval mm(static_cast<long>(m), 256);
    const Interval y(Rational(3, 10), 256);
    for (int side : {1, -1}) {
      const Interval u = p.u * mm * Interval(static_cast<long>(side), 256);
      const Interval at = kernel2_eval(p, u, y);
      CHECK(at.rad() < 1e-60);
      const Interval eps(Rational(1, 1000000000), 256);
      const Interval left = kernel2_eval(p, u - eps, y), right = kernel2_eval(p, u + eps, y);
      CHECK(std::abs(left.mid_double() - at.mid_double()) < 1e-7);
      CHECK(std::abs(right.mid_double() - at.mid_double()) < 1e-7);
      // A ball straddling the removable point still gets a finite enclosure.
      Interval wide = u;
      wide.add_error(1e-30);
      CHECK(kernel2_eval(p, wide, y).rad() < 1e-20);
    }
  }
}

TEST_CASE("sine kernel identity") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<long> num(-500, 500);
  for (int rep = 0; rep < 20; ++rep) {
    const Interval x(ratio(num(rng), 101), 128), t(ratio(num(rng) + 1000, 97), 128);
    const Interval lhs = x * kernel2_s_minus(x, t) / t;
    const Interval rhs = kernel2_s_plus(x, t) - cos(Interval::pi(128) * x) * kernel2_s(t);
    CHECK(lhs.overlaps(rhs));
  }
}

TEST_CASE("reproducing property") {
  // f(w) = int f(t) K(w, t) (1 - s(t)^2) dt for f(t) = s(t - w0), m = 1.
  // Gauss rule on unit cells of [-L, L]. The integrand is O(1/t^2), so the
  // cut leaves a tail a/L + O(1/L^2); the L = 60 and L = 120 values remove
  // the a/L term.
  const Kernel2Params p = Kernel2Params::make(1, 64);
  std::vector<double> gx, gw;
  oracle::gauss_legendre(8, gx, gw);
  const double w0 = 0.3;
  auto integral = [&](double w, int L) {
    const Interval wi = Interval::from_double(w, 64);
    double total = 0;
    for (int cell = -L; cell < L; ++cell)
      for (size_t q = 0; q < gx.size(); ++q) {
        const double t = cell + gx[q] + 1e-3;
        const double s = std::sin(M_PI * t) / (M_PI * t);
        const double f = std::sin(M_PI * (t - w0)) / (M_PI * (t - w0));
        total += gw[q] * f * kernel2_eval(p, wi, Interval::from_double(t, 64)).mid_double() * (1 - s * s);
      }
    return total;
  };
  for (double w : {0.0, 0.45, -1.2}) {
    const double expect = std::sin(M_PI * (w - w0)) / (M_PI * (w - w0));
    const double i60 = integral(w, 60), i120 = integral(w, 120);
    CHECK(std::abs(i60 - expect) < 1e-2);
    CHECK(std::abs(2 * i120 - i60 - expect) < 1e-4);
  }
}
