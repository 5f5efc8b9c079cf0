#include "corrbound/arith/scalar.hpp"

namespace corrbound {

const Rational& Scalar::rational() const {
  if (!is_exact()) throw std::logic_error("scalar is an enclosure, not a rational");
  return std::get<Rational>(v_);
}

Interval Scalar::to_interval(mpfr_prec_t prec) const {
  if (is_exact()) return Interval(std::get<Rational>(v_), prec);
  return std::get<Interval>(v_);
}

mpfr_prec_t Scalar::precision_or(mpfr_prec_t fallback) const {
  return is_exact() ? fallback : std::get<Interval>(v_).precision();
}

int Scalar::sign() const {
  if (is_exact()) return sgn(std::get<Rational>(v_));
  const auto& x = std::get<Interval>(v_);
  if (x.is_positive()) return 1;
  if (x.is_negative()) return -1;
  if (x.is_exact() && mpfr_zero_p(x.mid())) return 0;
  throw std::domain_error("sign of an enclosure containing zero is undetermined");
}

bool Scalar::is_zero() const {
  if (is_exact()) return std::get<Rational>(v_) == 0;
  const auto& x = std::get<Interval>(v_);
  return x.is_exact() && mpfr_zero_p(x.mid());
}

std::string Scalar::to_string(int digits) const {
  if (is_exact()) return corrbound::to_string(std::get<Rational>(v_));
  return std::get<Interval>(v_).to_string(digits);
}

namespace {
template <class ExactOp, class BallOp>
void combine(std::variant<Rational, Interval>& a, const std::variant<Rational, Interval>& b,
             ExactOp exact, BallOp ball) {
  if (std::holds_alternative<Rational>(a) && std::holds_alternative<Rational>(b)) {
    exact(std::get<Rational>(a), std::get<Rational>(b));
    return;
  }
  mpfr_prec_t prec = std::holds_alternative<Interval>(a) ? std::get<Interval>(a).precision()
                                                         : std::get<Interval>(b).precision();
  Interval x = std::holds_alternative<Interval>(a) ? std::get<Interval>(a)
                                                   : Interval(std::get<Rational>(a), prec);
  Interval y = std::holds_alternative<Interval>(b) ? std::get<Interval>(b)
                                                   : Interval(std::get<Rational>(b), prec);
  ball(x, y);
  a = std::move(x);
}
}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& x, const Rational& y) { x += y; },
          [](Interval& x, const Interval& y) { x = x + y; });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& x, const Rational& y) { x -= y; },
          [](Interval& x, const Interval& y) { x = x - y; });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& x, const Rational& y) { x *= y; },
          [](Interval& x, const Interval& y) { x = x * y; });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  combine(
      v_, o.v_,
      [](Rational& x, const Rational& y) {
        if (y == 0) throw std::domain_error("division by zero");
        x /= y;
      },
      [](Interval& x, const Interval& y) { x = x / y; });
  return *this;
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(v_)));
  return Scalar(-std::get<Interval>(v_));
}

Scalar sin(const Scalar& x) {
  if (x.is_exact()) throw TranscendentalInRationalMode("sin requested on an exact rational");
  return Scalar(sin(x.to_interval(kDefaultPrecision)));
}

Scalar cos(const Scalar& x) {
  if (x.is_exact()) throw TranscendentalInRationalMode("cos requested on an exact rational");
  return Scalar(cos(x.to_interval(kDefaultPrecision)));
}

}  // namespace corrbound
