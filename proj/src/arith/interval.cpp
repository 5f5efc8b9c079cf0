#include "corrbound/arith/interval.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <utility>

namespace corrbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

// Magnitude of an mpfr value rounded away from / toward zero.
double abs_up(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDA)); }
double abs_down(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDZ)); }

bool is_live(const __mpfr_struct* m) { return m->_mpfr_d != nullptr; }

void mpfr_to_rational(mpfr_srcptr x, Rational& out) {
  if (mpfr_zero_p(x)) {
    out = 0;
    return;
  }
  if (!mpfr_number_p(x)) throw std::domain_error("non-finite interval midpoint");
  mpz_class z;
  mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x);
  out = z;
  if (e > 0) {
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
}

}  // namespace

double add_up(double a, double b) {
  double s = a + b;
  return s == 0.0 ? 0.0 : up(s);
}
double mul_up(double a, double b) {
  double p = a * b;
  return p == 0.0 ? 0.0 : up(p);
}
double div_up(double a, double b) {
  double q = a / b;
  return q == 0.0 ? 0.0 : up(q);
}

double ulp_bound(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0.0;
  long e = mpfr_get_exp(x) - static_cast<long>(mpfr_get_prec(x));
  if (e < -1074) return std::numeric_limits<double>::denorm_min();
  if (e > 1023) return kInf;
  return std::ldexp(1.0, static_cast<int>(e));
}

Interval::Interval(mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  mpfr_set_zero(mid_, 1);
}

Interval::Interval(long v, mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  finish(mpfr_set_si(mid_, v, MPFR_RNDN));
}

Interval::Interval(const Rational& q, mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  finish(mpfr_set_q(mid_, q.get_mpq_t(), MPFR_RNDN));
}

Interval::Interval(const Interval& o) : rad_(o.rad_) {
  mpfr_init2(mid_, o.precision());
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
}

Interval::Interval(Interval&& o) noexcept : rad_(o.rad_) {
  *mid_ = *o.mid_;
  o.mid_->_mpfr_d = nullptr;
}

Interval& Interval::operator=(const Interval& o) {
  if (this == &o) return *this;
  if (!is_live(mid_)) {
    mpfr_init2(mid_, o.precision());
  } else if (precision() != o.precision()) {
    mpfr_set_prec(mid_, o.precision());
  }
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  rad_ = o.rad_;
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  if (this == &o) return *this;
  if (is_live(mid_)) mpfr_clear(mid_);
  *mid_ = *o.mid_;
  o.mid_->_mpfr_d = nullptr;
  rad_ = o.rad_;
  return *this;
}

Interval::~Interval() {
  if (is_live(mid_)) mpfr_clear(mid_);
}

void Interval::finish(int ternary) {
  if (ternary != 0) rad_ = add_up(rad_, ulp_bound(mid_));
}

void Interval::add_error(double e) { rad_ = add_up(rad_, e); }

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  r.finish(mpfr_const_pi(r.mid_, MPFR_RNDN));
  return r;
}

Interval Interval::from_mid_rad(mpfr_srcptr mid, double rad, mpfr_prec_t prec) {
  Interval r(prec);
  r.rad_ = rad;
  r.finish(mpfr_set(r.mid_, mid, MPFR_RNDN));
  return r;
}

Interval Interval::from_double(double v, mpfr_prec_t prec) {
  Interval r(prec);
  r.finish(mpfr_set_d(r.mid_, v, MPFR_RNDN));
  return r;
}

Interval Interval::from_strings(const std::string& mid, const std::string& rad,
                                mpfr_prec_t prec) {
  Interval r(prec);
  char* mend = nullptr;
  int t = mpfr_strtofr(r.mid_, mid.c_str(), &mend, 10, MPFR_RNDN);
  if (mend == mid.c_str() || *mend != '\0' || !mpfr_number_p(r.mid_)) {
    throw std::invalid_argument("bad decimal midpoint: " + mid);
  }
  // A string that is the canonical print of the parsed value names that
  // binary midpoint exactly; anything else keeps its conversion error.
  if (t != 0 && r.mid_string() != mid) r.finish(t);
  char* end = nullptr;
  double rv = std::strtod(rad.c_str(), &end);
  if (end == rad.c_str() || *end != '\0' || !(rv >= 0.0)) {
    throw std::invalid_argument("bad radius: " + rad);
  }
  // %.17g round-trips a double, so the radius is recovered exactly.
  char check[64];
  std::snprintf(check, sizeof check, "%.17g", rv);
  if (r.rad_ == 0.0 && rad == check) {
    r.rad_ = rv;
  } else {
    r.rad_ = add_up(r.rad_, up(rv));
  }
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  mpfr_prec_t prec = std::max(a.precision(), b.precision());
  mpfr_t lo, hi, t;
  mpfr_inits2(prec + 8, lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_sub_d(lo, a.mid_, a.rad_, MPFR_RNDD);
  mpfr_sub_d(t, b.mid_, b.rad_, MPFR_RNDD);
  mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_add_d(hi, a.mid_, a.rad_, MPFR_RNDU);
  mpfr_add_d(t, b.mid_, b.rad_, MPFR_RNDU);
  mpfr_max(hi, hi, t, MPFR_RNDU);
  Interval r(prec);
  mpfr_add(t, lo, hi, MPFR_RNDN);
  mpfr_div_2ui(r.mid_, t, 1, MPFR_RNDN);
  mpfr_sub(t, hi, r.mid_, MPFR_RNDU);
  double r1 = mpfr_get_d(t, MPFR_RNDU);
  mpfr_sub(t, r.mid_, lo, MPFR_RNDU);
  double r2 = mpfr_get_d(t, MPFR_RNDU);
  r.rad_ = std::max(r1, r2);
  mpfr_clears(lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  return r;
}

double Interval::mag() const { return add_up(abs_up(mid_), rad_); }

double Interval::mig() const {
  double m = abs_down(mid_);
  if (m <= rad_) return 0.0;
  double d = down(m - rad_);
  return d > 0.0 ? d : 0.0;
}

bool Interval::contains_zero() const { return mig() == 0.0; }
bool Interval::is_positive() const { return mpfr_sgn(mid_) > 0 && mig() > 0.0; }
bool Interval::is_negative() const { return mpfr_sgn(mid_) < 0 && mig() > 0.0; }

bool Interval::contains(const Rational& q) const {
  Rational m;
  mpfr_to_rational(mid_, m);
  Rational diff = q - m;
  if (sgn(diff) < 0) diff = -diff;
  return diff <= Rational(rad_);
}

bool Interval::contains(const Interval& o) const {
  return lower_rational() <= o.lower_rational() && o.upper_rational() <= upper_rational();
}

bool Interval::overlaps(const Interval& o) const {
  return !(upper_rational() < o.lower_rational() || o.upper_rational() < lower_rational());
}

Rational Interval::mid_rational() const {
  Rational m;
  mpfr_to_rational(mid_, m);
  return m;
}
Rational Interval::lower_rational() const { return mid_rational() - Rational(rad_); }
Rational Interval::upper_rational() const { return mid_rational() + Rational(rad_); }

std::string Interval::mid_string() const {
  int digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 2;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits, mid_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::string Interval::rad_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", rad_);
  return buf;
}

std::string Interval::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, mid_);
  std::string s(buf);
  mpfr_free_str(buf);
  char rb[64];
  std::snprintf(rb, sizeof rb, " +/- %.3g", rad_);
  return s + rb;
}

std::string Interval::lower_string(int digits) const {
  mpfr_t t;
  mpfr_init2(t, precision() + 8);
  mpfr_sub_d(t, mid_, rad_, MPFR_RNDD);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RDe", digits, t);
  std::string s(buf);
  mpfr_free_str(buf);
  mpfr_clear(t);
  return s;
}

std::string Interval::upper_string(int digits) const {
  mpfr_t t;
  mpfr_init2(t, precision() + 8);
  mpfr_add_d(t, mid_, rad_, MPFR_RNDU);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RUe", digits, t);
  std::string s(buf);
  mpfr_free_str(buf);
  mpfr_clear(t);
  return s;
}

void Interval::set_zero() {
  mpfr_set_zero(mid_, 1);
  rad_ = 0.0;
}

void Interval::set_sum(const Interval& a, const Interval& b) {
  double r = add_up(a.rad_, b.rad_);
  int t = mpfr_add(mid_, a.mid_, b.mid_, MPFR_RNDN);
  rad_ = r;
  finish(t);
}

void Interval::set_product(const Interval& a, const Interval& b) {
  double am = abs_up(a.mid_), bm = abs_up(b.mid_);
  double r = add_up(add_up(mul_up(am, b.rad_), mul_up(bm, a.rad_)), mul_up(a.rad_, b.rad_));
  int t = mpfr_mul(mid_, a.mid_, b.mid_, MPFR_RNDN);
  rad_ = r;
  finish(t);
}

void Interval::add_product(const Interval& a, const Interval& b) {
  Interval p(precision());
  p.set_product(a, b);
  set_sum(*this, p);
}

void Interval::set_scaled(const Interval& a, long num, long den) {
  if (den == 0) throw std::domain_error("division by zero");
  double f = div_up(std::fabs(static_cast<double>(num)), down(std::fabs(static_cast<double>(den))));
  double r = mul_up(a.rad_, up(f));
  int t1 = mpfr_mul_si(mid_, a.mid_, num, MPFR_RNDN);
  double e1 = t1 != 0 ? ulp_bound(mid_) : 0.0;
  int t2 = mpfr_div_si(mid_, mid_, den, MPFR_RNDN);
  rad_ = add_up(r, mul_up(e1, up(1.0 / std::fabs(static_cast<double>(den)))));
  finish(t2);
}

void Interval::set_ratio(long num, long den) {
  if (den == 0) throw std::domain_error("division by zero");
  int t1 = mpfr_set_si(mid_, num, MPFR_RNDN);
  rad_ = 0.0;
  if (t1 != 0) {
    rad_ = div_up(ulp_bound(mid_), down(std::fabs(static_cast<double>(den))));
  }
  finish(mpfr_div_si(mid_, mid_, den, MPFR_RNDN));
}

void Interval::mul_long(long k) {
  rad_ = mul_up(rad_, std::fabs(static_cast<double>(k)));
  finish(mpfr_mul_si(mid_, mid_, k, MPFR_RNDN));
}

Interval& Interval::operator+=(const Interval& o) {
  set_sum(*this, o);
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  double r = add_up(rad_, o.rad_);
  int t = mpfr_sub(mid_, mid_, o.mid_, MPFR_RNDN);
  rad_ = r;
  finish(t);
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  set_product(*this, o);
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  double lo = o.mig();
  if (!(lo > 0.0)) throw std::domain_error("interval division by a ball containing zero");
  int t = mpfr_div(mid_, mid_, o.mid_, MPFR_RNDN);
  double q = add_up(abs_up(mid_), ulp_bound(mid_));
  double num = add_up(rad_, mul_up(q, o.rad_));
  rad_ = div_up(num, lo);
  finish(t);
  return *this;
}

Interval Interval::operator-() const {
  Interval r(*this);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

namespace {
void widen(Interval& a, const Interval& b) {
  if (b.precision() > a.precision()) mpfr_prec_round(a.mid_mut(), b.precision(), MPFR_RNDN);
}
}  // namespace

Interval operator+(Interval a, const Interval& b) {
  widen(a, b);
  a += b;
  return a;
}
Interval operator-(Interval a, const Interval& b) {
  widen(a, b);
  a -= b;
  return a;
}
Interval operator*(Interval a, const Interval& b) {
  widen(a, b);
  a *= b;
  return a;
}
Interval operator/(Interval a, const Interval& b) {
  widen(a, b);
  a /= b;
  return a;
}

Interval sqr(const Interval& x) {
  Interval r(x.precision());
  double m = abs_up(x.mid());
  double rad = add_up(mul_up(2.0, mul_up(m, x.rad())), mul_up(x.rad(), x.rad()));
  int t = mpfr_sqr(r.mid_mut(), x.mid(), MPFR_RNDN);
  r.add_error(rad);
  if (t != 0) r.add_error(ulp_bound(r.mid()));
  return r;
}

Interval sqrt(const Interval& x) {
  Interval r(x.precision());
  if (x.is_exact() && mpfr_sgn(x.mid()) >= 0) {
    if (mpfr_sqrt(r.mid_mut(), x.mid(), MPFR_RNDN) != 0) r.add_error(ulp_bound(r.mid()));
    return r;
  }
  double lo = x.mig();
  if (lo > 0.0 && mpfr_sgn(x.mid()) > 0) {
    int t = mpfr_sqrt(r.mid_mut(), x.mid(), MPFR_RNDN);
    r.add_error(div_up(x.rad(), down(std::sqrt(lo))));
    if (t != 0) r.add_error(ulp_bound(r.mid()));
    return r;
  }
  if (mpfr_sgn(x.mid()) < 0 && x.mig() > 0.0) throw std::domain_error("sqrt of a negative ball");
  // Ball straddles zero: enclose by [0, sqrt(upper)].
  double hi = up(std::sqrt(x.mag()));
  mpfr_set_d(r.mid_mut(), hi / 2, MPFR_RNDN);
  r.add_error(up(hi / 2));
  return r;
}

Interval sin(const Interval& x) {
  Interval r(x.precision());
  int t = mpfr_sin(r.mid_mut(), x.mid(), MPFR_RNDN);
  r.add_error(x.rad());
  if (t != 0) r.add_error(ulp_bound(r.mid()));
  return r;
}

Interval cos(const Interval& x) {
  Interval r(x.precision());
  int t = mpfr_cos(r.mid_mut(), x.mid(), MPFR_RNDN);
  r.add_error(x.rad());
  if (t != 0) r.add_error(ulp_bound(r.mid()));
  return r;
}

Interval cot(const Interval& x) { return cos(x) / sin(x); }

Interval abs(const Interval& x) {
  Interval r(x);
  if (mpfr_sgn(r.mid()) < 0) mpfr_neg(r.mid_mut(), r.mid(), MPFR_RNDN);
  if (x.contains_zero() && !x.is_exact()) {
    // Keep the ball inside [0, mag].
    double hi = x.mag();
    Interval h(x.precision());
    mpfr_set_d(h.mid_mut(), hi / 2, MPFR_RNDN);
    h.add_error(up(hi / 2));
    return h;
  }
  return r;
}

Interval pow(const Interval& x, unsigned k) {
  Interval result(1L, x.precision());
  Interval base(x);
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1;
    if (k > 0) base = sqr(base);
  }
  return result;
}

Interval sinc_pi(const Interval& x) {
  mpfr_prec_t prec = x.precision();
  if (x.is_exact() && mpfr_zero_p(x.mid())) return Interval(1L, prec);
  if (!x.contains_zero()) {
    Interval t = Interval::pi(prec) * x;
    return sin(t) / t;
  }
  double m = mul_up(3.1415926535897936, x.mag());
  Interval r(prec);
  if (m < 1.0) {
    double h = div_up(mul_up(m, m), 6.0);
    // sinc lies in [1 - h, 1]; center the ball on 1 - h/2.
    mpfr_set_d(r.mid_mut(), 1.0, MPFR_RNDN);
    mpfr_sub_d(r.mid_mut(), r.mid(), h / 2, MPFR_RNDN);
    r.add_error(up(h / 2));
    r.add_error(ulp_bound(r.mid()));
    return r;
  }
  // |sinc| <= 1 and sinc > -0.2173 everywhere.
  mpfr_set_d(r.mid_mut(), 0.39135, MPFR_RNDN);
  r.add_error(0.60866);
  return r;
}

namespace {
// q reduced to [0, 2).
Rational mod2(const Rational& q) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  mpz_class even = fl - (fl % 2 + 2) % 2;  // largest even integer <= q
  return q - Rational(even);
}
}  // namespace

Interval cos_pi(const Rational& q, mpfr_prec_t prec) {
  Rational r = mod2(q);
  if (r == 0) return Interval(1L, prec);
  if (r == 1) return Interval(-1L, prec);
  if (r == Rational(1, 2) || r == Rational(3, 2)) return Interval(0L, prec);
  return cos(Interval::pi(prec) * Interval(r, prec));
}

Interval sin_pi(const Rational& q, mpfr_prec_t prec) {
  Rational r = mod2(q);
  if (r == 0 || r == 1) return Interval(0L, prec);
  if (r == Rational(1, 2)) return Interval(1L, prec);
  if (r == Rational(3, 2)) return Interval(-1L, prec);
  return sin(Interval::pi(prec) * Interval(r, prec));
}

}  // namespace corrbound
