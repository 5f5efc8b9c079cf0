#include "corrbound/kernel_n2.hpp"

#include <cmath>

namespace corrbound {

namespace {

// Ball around 0 of radius r at prec.
Interval ball0(double r, mpfr_prec_t prec) {
  Interval z(prec);
  z.add_error(r);
  return z;
}

// s'(t) = (cos(pi t) - s(t)) / t, with |s'(t)| <= pi^2 |t| / 3 near 0
// (s(t) = int_0^1 cos(pi t v) dv, so |s''| <= pi^2 / 3).
Interval s_prime(const Interval& t) {
  const mpfr_prec_t prec = t.precision();
  if (t.contains_zero() || t.mag() < std::ldexp(1.0, -static_cast<int>(prec) / 4))
    return ball0(mul_up(t.mag(), 3.2899), prec);  // pi^2 / 3 < 3.2899
  const Interval pt = Interval::pi(prec) * t;
  return (cos(pt) - kernel2_s(t)) / t;
}

struct Pieces {
  Interval d_val, d_der;            // 2 (pi m x)^2 - 1 and its derivative
  Interval np_val, np_der;          // numerator of k_+
  Interval nm_val, nm_der;          // numerator of k_-
};

// Numerators N_pm(x) = 2 (pi m x)^2 k_pm(x, y) (2 (pi m x)^2 - 1)^{-1} cleared:
//   N_+ = 2 (pi m x)^2 s_+(x, y) - (s_+(u, y) / a(u)) ((1 - 2m) pi x sin(pi x) + cos(pi x))
//   N_- = 2 (pi m x)^2 s_-(x, y) - (s_-(u, y) / b(u)) x cos(pi x)
Pieces pieces(const Kernel2Params& p, const Interval& x, const Interval& y, bool derivatives) {
  const mpfr_prec_t prec = p.prec;
  const Interval pi = Interval::pi(prec);
  const Interval pm = pi * Interval(static_cast<long>(p.m), prec);
  const Interval two_pm2 = Interval(2L, prec) * pm * pm;
  const Interval q = two_pm2 * x * x;
  const Interval cp = kernel2_s_plus(p.u, y) / p.a_u;
  const Interval cm = kernel2_s_minus(p.u, y) / p.b_u;
  const Interval px = pi * x;
  const Interval sn = sin(px), cs = cos(px);
  const Interval k12 = Interval(1L - 2L * p.m, prec);
  const Interval sp = kernel2_s_plus(x, y), sm = kernel2_s_minus(x, y);

  Pieces r;
  r.d_val = q - Interval(1L, prec);
  r.np_val = q * sp - cp * (k12 * px * sn + cs);
  r.nm_val = q * sm - cm * x * cs;
  if (!derivatives) return r;
  const Interval two = Interval(2L, prec);
  const Interval dq = two * two_pm2 * x;
  const Interval dsm1 = s_prime(x - y), dsp1 = s_prime(x + y);
  const Interval dsp = (dsm1 + dsp1) / two, dsm = (dsm1 - dsp1) / two;
  // d/dx of (1 - 2m) pi x sin(pi x) + cos(pi x) and of x cos(pi x)
  const Interval dmp = k12 * pi * (sn + px * cs) - pi * sn;
  const Interval dmm = cs - px * sn;
  r.d_der = dq;
  r.np_der = dq * sp + q * dsp - cp * dmp;
  r.nm_der = dq * sm + q * dsm - cm * dmm;
  return r;
}

}  // namespace

Interval kernel2_s(const Interval& t) { return sinc_pi(t); }

Interval kernel2_s_plus(const Interval& x, const Interval& y) {
  return (kernel2_s(x - y) + kernel2_s(x + y)) / Interval(2L, x.precision());
}

Interval kernel2_s_minus(const Interval& x, const Interval& y) {
  return (kernel2_s(x - y) - kernel2_s(x + y)) / Interval(2L, x.precision());
}

Interval kernel2_a(int m, const Interval& x) {
  const mpfr_prec_t prec = x.precision();
  const Interval pi = Interval::pi(prec);
  const Interval px = pi * x;
  const Interval pmx = px * Interval(static_cast<long>(m), prec);
  return -kernel2_s(x) / Interval(static_cast<long>(m), prec) +
         (px * sin(px) + cos(px)) / (Interval(2L, prec) * pmx * pmx);
}

Interval kernel2_b(int m, const Interval& x) {
  const mpfr_prec_t prec = x.precision();
  const Interval pm = Interval::pi(prec) * Interval(static_cast<long>(m), prec);
  return cos(Interval::pi(prec) * x) / (Interval(2L, prec) * pm * pm * x);
}

Kernel2Params Kernel2Params::make(int m, mpfr_prec_t prec) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  Kernel2Params p;
  p.m = m;
  p.prec = prec;
  p.u = Interval(1L, prec) / (Interval::pi(prec) * Interval(static_cast<long>(m), prec) * sqrt(Interval(2L, prec)));
  p.a_u = kernel2_a(m, p.u);
  p.b_u = kernel2_b(m, p.u);
  return p;
}

Interval k00(int m, mpfr_prec_t prec) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  const Interval r2 = sqrt(Interval(2L, prec));
  const Interval mm(static_cast<long>(m), prec);
  return Interval(1L, prec) /
         (cot(Interval(1L, prec) / (r2 * mm)) / r2 - Interval(2L * m - 1, prec) / (Interval(2L, prec) * mm));
}

Interval c2(int m, mpfr_prec_t prec) { return Interval(1L, prec) / k00(m, prec); }

Interval kernel2_eval(const Kernel2Params& p, const Interval& x_in, const Interval& y_in) {
  const mpfr_prec_t prec = p.prec;
  const Interval mm(static_cast<long>(p.m), prec);
  const Interval x = x_in / mm, y = y_in / mm;
  // Distance to the nearer of pm u decides between direct evaluation and
  // the mean value form. Direct evaluation loses about log2(1/|x - u|) bits,
  // the mean value enclosure has width about |x - u|; 2^{-prec/2} balances.
  const bool upper = x.mid_double() >= 0;
  const Interval pole = upper ? p.u : -p.u;
  const Interval gap = x - pole;
  const double near = std::ldexp(1.0, -static_cast<int>(prec) / 2);
  Interval kp(prec), km(prec);
  if (gap.contains_zero() || gap.mag() < near) {
    // N(pole) = D(pole) = 0, so N(x) / D(x) = N'(xi) / D'(xi) for some xi
    // between x and the pole.
    const Pieces h = pieces(p, Interval::hull(x, pole), y, true);
    kp = h.np_der / h.d_der;
    km = h.nm_der / h.d_der;
  } else {
    const Pieces h = pieces(p, x, y, false);
    kp = h.np_val / h.d_val;
    km = h.nm_val / h.d_val;
  }
  return (kp + km) / mm;
}

Interval kernel2_eval(int m, const Scalar& x, const Scalar& y, mpfr_prec_t prec) {
  const Kernel2Params p = Kernel2Params::make(m, prec);
  return kernel2_eval(p, x.to_interval(prec), y.to_interval(prec));
}

}  // namespace corrbound
