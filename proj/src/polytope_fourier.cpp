#include "corrbound/polytope_fourier.hpp"

#include <map>
#include <string>

namespace corrbound {

namespace {

LinearForm unit(int dim, int j, long c = 1) {
  LinearForm l(static_cast<size_t>(dim), 0);
  l[static_cast<size_t>(j)] = c;
  return l;
}

LinearForm diff(int dim, int j, int i) {
  LinearForm l = unit(dim, j);
  l[static_cast<size_t>(i)] -= 1;
  return l;
}

LinearForm sum(int dim, int j, int i) {
  LinearForm l = unit(dim, j);
  l[static_cast<size_t>(i)] += 1;
  return l;
}

Rational sign_power(int e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

Rational eval_form(const LinearForm& l, const std::vector<Rational>& y) {
  Rational r = 0;
  for (size_t i = 0; i < l.size(); ++i)
    if (l[i] != 0) r += l[i] * y[i];
  return r;
}

Interval eval_form(const LinearForm& l, const std::vector<Interval>& y, mpfr_prec_t prec) {
  Interval r(prec);
  for (size_t i = 0; i < l.size(); ++i) {
    if (l[i] == 0) continue;
    Interval t = y[i];
    t.mul_long(l[i]);
    r += t;
  }
  return r;
}

Interval pi_power(int p, mpfr_prec_t prec) {
  Interval pp = pow(Interval::pi(prec), static_cast<unsigned>(p < 0 ? -p : p));
  return p < 0 ? Interval(1L, prec) / pp : pp;
}

Interval finish(const TermFormula& f, const Interval& total, mpfr_prec_t prec) {
  return Interval(f.prefactor, prec) * pi_power(f.pi_power, prec) * total;
}

// Simplex terms R_j = 1/(y_j prod_{i != j}(y_j - y_i)).
std::vector<std::pair<LinearForm, int>> simplex_factors(int n, int j) {
  std::vector<std::pair<LinearForm, int>> fs{{unit(n, j), -1}};
  for (int i = 0; i < n; ++i)
    if (i != j) fs.emplace_back(diff(n, j, i), -1);
  return fs;
}

}  // namespace

TermFormula simplex_real_part_formula(int n) {
  TermFormula f;
  f.dim = n;
  f.prefactor = sign_power(n + 1) / pow(Rational(2), static_cast<unsigned>(n));
  f.pi_power = -n;
  for (int j = 0; j < n; ++j) {
    TrigFactor s{true, unit(n, j)};
    f.terms.push_back({Rational(2), {s, s}, simplex_factors(n, j)});
  }
  return f;
}

TermFormula simplex_imag_part_formula(int n) {
  TermFormula f = simplex_real_part_formula(n);
  for (int j = 0; j < n; ++j) {
    f.terms[static_cast<size_t>(j)].coeff = 1;
    f.terms[static_cast<size_t>(j)].trig = {TrigFactor{true, unit(n, j, 2)}};
  }
  return f;
}

TermFormula cross_polytope_formula(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  TermFormula f;
  f.dim = n;
  f.pi_power = -n;
  const bool odd = n % 2 == 1;
  f.prefactor = odd ? sign_power((n - 1) / 2) : sign_power(n / 2 - 1);
  for (int j = 0; j < n; ++j) {
    FormulaTerm t;
    if (odd) {
      t.coeff = 1;
      t.trig = {TrigFactor{true, unit(n, j, 2)}};
    } else {
      t.coeff = 2;
      t.trig = {TrigFactor{true, unit(n, j)}, TrigFactor{true, unit(n, j)}};
    }
    if (n - 2 != 0) t.factors.emplace_back(unit(n, j), n - 2);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      t.factors.emplace_back(diff(n, j, i), -1);
      t.factors.emplace_back(sum(n, j, i), -1);
    }
    f.terms.push_back(std::move(t));
  }
  return f;
}

TermFormula polytope_h_formula(int n) {
  if (n < 2) throw std::invalid_argument("H_{n-1} needs n >= 2");
  const int k = n - 1;
  const bool odd = n % 2 == 1;
  TermFormula f;
  f.dim = k;
  f.prefactor = (odd ? sign_power((n - 1) / 2) : sign_power(n / 2 - 1)) /
                pow(Rational(2), static_cast<unsigned>(n - 2));
  f.pi_power = -(n - 1);
  for (int j = 0; j < k; ++j)
    for (int l = j + 1; l < k; ++l) {
      FormulaTerm t;
      t.coeff = odd ? -1 : 1;
      t.trig = {TrigFactor{!odd, diff(k, j, l)}};
      if (n - 3 != 0) t.factors.emplace_back(diff(k, j, l), n - 3);
      t.factors.emplace_back(unit(k, j), -1);
      t.factors.emplace_back(unit(k, l), -1);
      for (int i = 0; i < k; ++i) {
        if (i == j || i == l) continue;
        t.factors.emplace_back(diff(k, j, i), -1);
        t.factors.emplace_back(diff(k, l, i), -1);
      }
      f.terms.push_back(std::move(t));
    }
  for (int j = 0; j < k; ++j) {
    FormulaTerm t;
    t.coeff = 1;
    t.trig = {TrigFactor{!odd, unit(k, j)}};
    if (n - 3 != 0) t.factors.emplace_back(unit(k, j), n - 3);
    for (int i = 0; i < k; ++i) {
      if (i == j) continue;
      t.factors.emplace_back(diff(k, j, i), -1);
      t.factors.emplace_back(unit(k, i), -1);
    }
    f.terms.push_back(std::move(t));
  }
  return f;
}

SingularPattern singular_pattern(const std::vector<Scalar>& y) {
  SingularPattern p;
  auto is_zero = [](const Scalar& s) {
    if (s.is_exact()) return s.rational() == 0;
    Interval x = s.to_interval(kDefaultPrecision);
    if (x.is_exact() && mpfr_zero_p(x.mid())) return true;
    if (x.contains_zero()) throw SingularInputError("cannot decide whether a coordinate vanishes");
    return false;
  };
  for (size_t i = 0; i < y.size(); ++i)
    if (is_zero(y[i])) p.zero_coords.push_back(static_cast<int>(i));
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = i + 1; j < y.size(); ++j)
      if (is_zero(y[i] - y[j])) p.equal_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return p;
}

Interval evaluate_formula(const TermFormula& f, const std::vector<Scalar>& y, mpfr_prec_t prec) {
  if (static_cast<int>(y.size()) != f.dim) throw std::invalid_argument("coordinate count mismatch");
  bool exact = true;
  for (const auto& s : y) exact = exact && s.is_exact();
  Interval total(prec);
  if (exact) {
    std::vector<Rational> q;
    for (const auto& s : y) q.push_back(s.rational());
    for (const auto& t : f.terms) {
      Rational r = t.coeff;
      for (const auto& [l, p] : t.factors) {
        Rational v = eval_form(l, q);
        if (v == 0) {
          if (p < 0) throw SingularInputError("denominator vanishes; use the limit evaluation");
          if (p > 0) r = 0;
          continue;
        }
        r *= p >= 0 ? pow(v, static_cast<unsigned>(p)) : 1 / pow(v, static_cast<unsigned>(-p));
      }
      if (r == 0) continue;
      Interval term(r, prec);
      for (const auto& tf : t.trig) {
        Rational a = eval_form(tf.arg, q);
        term *= tf.is_sin ? sin_pi(a, prec) : cos_pi(a, prec);
      }
      total += term;
    }
    return finish(f, total, prec);
  }
  std::vector<Interval> x;
  for (const auto& s : y) x.push_back(s.to_interval(prec));
  const Interval pi = Interval::pi(prec);
  for (const auto& t : f.terms) {
    Interval term(t.coeff, prec);
    for (const auto& [l, p] : t.factors) {
      Interval v = eval_form(l, x, prec);
      if (p < 0 && v.contains_zero()) throw SingularInputError("denominator ball contains zero");
      Interval vp = pow(v, static_cast<unsigned>(p < 0 ? -p : p));
      term = p < 0 ? term / vp : term * vp;
    }
    for (const auto& tf : t.trig) {
      Interval a = pi * eval_form(tf.arg, x, prec);
      term *= tf.is_sin ? sin(a) : cos(a);
    }
    total += term;
  }
  return finish(f, total, prec);
}

namespace {

// Coefficients of (1 + r eps)^p up to eps^order, exact.
std::vector<Rational> binomial_series(const Rational& r, int p, int order) {
  std::vector<Rational> c(static_cast<size_t>(order + 1));
  c[0] = 1;
  for (int k = 1; k <= order; ++k) c[static_cast<size_t>(k)] = c[static_cast<size_t>(k - 1)] * r * (p - (k - 1)) / k;
  return c;
}

template <class T>
std::vector<T> truncated_product(const std::vector<T>& a, const std::vector<T>& b, int order, const T& zero) {
  std::vector<T> c(static_cast<size_t>(order + 1), zero);
  for (int i = 0; i <= order; ++i)
    for (int j = 0; i + j <= order; ++j) c[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  return c;
}

// Taylor coefficients of trig(pi (c + d eps)).
std::vector<Interval> trig_series(bool is_sin, const Rational& c, const Rational& d, int order, mpfr_prec_t prec) {
  const Interval s0 = sin_pi(c, prec), c0 = cos_pi(c, prec);
  std::vector<Interval> out(static_cast<size_t>(order + 1), Interval(prec));
  const Interval pd = Interval::pi(prec) * Interval(d, prec);
  Interval pw(1L, prec);  // (pi d)^k / k!
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      pw *= pd;
      pw /= Interval(static_cast<long>(k), prec);
    }
    // d^k/d eps^k of trig(pi c + t) at t = 0 cycles through the derivatives.
    const int phase = k % 4;
    Interval v(prec);
    if (is_sin) {
      v = phase == 0 ? s0 : phase == 1 ? c0 : phase == 2 ? -s0 : -c0;
    } else {
      v = phase == 0 ? c0 : phase == 1 ? -s0 : phase == 2 ? -c0 : s0;
    }
    out[static_cast<size_t>(k)] = v * pw;
  }
  return out;
}

bool direction_ok(const TermFormula& f, const std::vector<Rational>& y0, const std::vector<long>& v) {
  for (const auto& t : f.terms)
    for (const auto& [l, p] : t.factors) {
      if (p == 0) continue;
      long lv = 0;
      for (size_t i = 0; i < l.size(); ++i) lv += l[i] * v[i];
      if (eval_form(l, y0) == 0 && lv == 0) return false;
    }
  return true;
}

std::vector<long> choose_direction(const TermFormula& f, const std::vector<Rational>& y0) {
  const size_t k = y0.size();
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<long> v(k);
    for (size_t i = 0; i < k; ++i) {
      long base = static_cast<long>(i) + 1;
      v[i] = attempt == 0 ? base : attempt == 1 ? base * base : primes[(i + static_cast<size_t>(attempt)) % 12] * (attempt % 2 ? 1 : -1) + static_cast<long>(i);
    }
    if (direction_ok(f, y0, v)) return v;
  }
  throw SingularInputError("no admissible limit direction found");
}

}  // namespace

Interval limit_formula(const TermFormula& f, const std::vector<Rational>& y0, mpfr_prec_t prec, int max_order) {
  if (static_cast<int>(y0.size()) != f.dim) throw std::invalid_argument("coordinate count mismatch");
  const std::vector<long> v = choose_direction(f, y0);
  std::vector<Rational> vq(v.begin(), v.end());
  // Laurent coefficients by degree (<= 0 only).
  std::map<int, Interval> laurent;
  for (const auto& t : f.terms) {
    int val = 0;
    for (const auto& [l, p] : t.factors)
      if (eval_form(l, y0) == 0) val += p;
    if (val > 0) continue;  // term vanishes at the point
    const int order = -val;
    if (order > max_order) {
      throw ExpansionCapError("limit expansion needs order " + std::to_string(order) + " > cap " +
                              std::to_string(max_order));
    }
    std::vector<Rational> rs(static_cast<size_t>(order + 1), Rational(0));
    rs[0] = t.coeff;
    for (const auto& [l, p] : t.factors) {
      if (p == 0) continue;
      const Rational a = eval_form(l, y0), b = eval_form(l, vq);
      if (a == 0) {
        Rational bp = p > 0 ? pow(b, static_cast<unsigned>(p)) : 1 / pow(b, static_cast<unsigned>(-p));
        for (auto& c : rs) c *= bp;
      } else {
        Rational ap = p > 0 ? pow(a, static_cast<unsigned>(p)) : 1 / pow(a, static_cast<unsigned>(-p));
        std::vector<Rational> bs = binomial_series(b / a, p, order);
        for (auto& c : bs) c *= ap;
        rs = truncated_product(rs, bs, order, Rational(0));
      }
    }
    std::vector<Interval> series;
    for (const auto& c : rs) series.emplace_back(c, prec);
    for (const auto& tf : t.trig) {
      series = truncated_product(series, trig_series(tf.is_sin, eval_form(tf.arg, y0), eval_form(tf.arg, vq), order, prec),
                                 order, Interval(prec));
    }
    for (int i = 0; i <= order; ++i) {
      auto it = laurent.try_emplace(val + i, Interval(prec)).first;
      it->second += series[static_cast<size_t>(i)];
    }
  }
  for (const auto& [deg, c] : laurent) {
    if (deg < 0 && !c.contains_zero()) {
      throw NonCancellationError("pole of order " + std::to_string(-deg) + " does not cancel");
    }
  }
  auto it = laurent.find(0);
  Interval value = it == laurent.end() ? Interval(prec) : it->second;
  return finish(f, value, prec);
}

ComplexInterval ft_simplex(int n, const std::vector<Scalar>& y, mpfr_prec_t prec) {
  if (n < 1 || static_cast<int>(y.size()) != n) throw std::invalid_argument("simplex dimension mismatch");
  Interval s = evaluate_formula(simplex_real_part_formula(n), y, prec);
  Interval t = evaluate_formula(simplex_imag_part_formula(n), y, prec);
  // Prefactor already applied; multiply (S + iT) by (-i)^n.
  switch (n % 4) {
    case 0: return {s, t};
    case 1: return {t, -s};
    case 2: return {-s, -t};
    default: return {-t, s};
  }
}

Interval ft_cross_polytope(int n, const std::vector<Scalar>& y, mpfr_prec_t prec) {
  const TermFormula f = cross_polytope_formula(n);
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("cross-polytope dimension mismatch");
  bool exact = true;
  for (const auto& s : y) exact = exact && s.is_exact();
  if (!exact) return evaluate_formula(f, y, prec);
  std::vector<Rational> q;
  for (const auto& s : y) q.push_back(s.rational());
  bool singular = false;
  for (const auto& t : f.terms)
    for (const auto& [l, p] : t.factors) singular = singular || (p < 0 && eval_form(l, q) == 0);
  return singular ? limit_formula(f, q, prec) : evaluate_formula(f, y, prec);
}

Interval ft_H_singular_limit(int n, const Rational& scale, const std::vector<Rational>& y,
                             const SingularPattern& pattern, mpfr_prec_t prec, int max_order) {
  std::vector<Rational> ys;
  std::vector<Scalar> check;
  for (const auto& c : y) {
    ys.push_back(scale * c);
    check.emplace_back(ys.back());
  }
  if (singular_pattern(check) != pattern) throw std::invalid_argument("singular pattern does not match the point");
  Interval v = limit_formula(polytope_h_formula(n), ys, prec, max_order);
  return Interval(pow(scale, static_cast<unsigned>(n - 1)), prec) * v;
}

Interval ft_H(int n, const Rational& scale, const std::vector<Scalar>& y, mpfr_prec_t prec, int max_order) {
  if (static_cast<int>(y.size()) != n - 1) throw std::invalid_argument("H_{n-1} needs n-1 coordinates");
  if (scale <= 0) throw std::invalid_argument("scale must be positive");
  std::vector<Scalar> ys;
  for (const auto& c : y) ys.push_back(Scalar(scale) * c);
  const SingularPattern pat = singular_pattern(ys);
  if (pat.any()) {
    std::vector<Rational> q;
    for (const auto& c : ys) {
      if (!c.is_exact()) throw SingularInputError("singular point given as an enclosure");
      q.push_back(c.rational());
    }
    Interval v = limit_formula(polytope_h_formula(n), q, prec, max_order);
    return Interval(pow(scale, static_cast<unsigned>(n - 1)), prec) * v;
  }
  Interval v = evaluate_formula(polytope_h_formula(n), ys, prec);
  return Interval(pow(scale, static_cast<unsigned>(n - 1)), prec) * v;
}

}  // namespace corrbound
