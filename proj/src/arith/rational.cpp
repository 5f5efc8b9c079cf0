#include "corrbound/arith/rational.hpp"

#include <stdexcept>

namespace corrbound {

Rational parse_rational(const std::string& s) {
  Rational q;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (dot != std::string::npos && slash == std::string::npos) {
    // Plain decimal such as "-0.125"; exponents are not accepted.
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    mpz_class num, den = 1;
    if (num.set_str(ip + fp, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    q = Rational(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

Rational ratio(const Integer& p, const Integer& q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string to_decimal(const Rational& q, int digits) {
  if (q == 0) return "0";
  // Scale to an integer with `digits` significant digits.
  Rational a = abs(q);
  long e10 = 0;
  Rational lo = 1;
  while (a >= 10 * lo) {
    lo *= 10;
    ++e10;
  }
  while (a < lo) {
    lo /= 10;
    --e10;
  }
  long shift = digits - 1 - e10;
  Rational scaled = a;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift >= 0 ? shift : -shift));
  if (shift >= 0) {
    scaled *= p10;
  } else {
    scaled /= p10;
  }
  mpz_class n = scaled.get_num(), d = scaled.get_den();
  mpz_class r = (2 * n + d) / (2 * d);  // round half up
  std::string digs = r.get_str();
  if (static_cast<int>(digs.size()) > digits) {  // rounding carried, e.g. 9.99 -> 10.0
    ++e10;
    digs.pop_back();
  }
  std::string out = sgn(q) < 0 ? "-" : "";
  out += digs.substr(0, 1);
  if (digits > 1) out += "." + digs.substr(1);
  out += "e" + std::to_string(e10);
  return out;
}

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

Rational pow(const Rational& q, unsigned k) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), k);
  return Rational(n, d);
}

}  // namespace corrbound
