#include "corrbound/arith/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace corrbound {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

long IntMatrix::determinant() const {
  if (rows != cols) throw std::invalid_argument("determinant of a non-square matrix");
  // Exact via rational elimination; matrices here are tiny.
  int n = rows;
  std::vector<Rational> m(a.begin(), a.end());
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && m[static_cast<size_t>(p * n + c)] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m[static_cast<size_t>(p * n + j)], m[static_cast<size_t>(c * n + j)]);
      det = -det;
    }
    Rational piv = m[static_cast<size_t>(c * n + c)];
    det *= piv;
    for (int r = c + 1; r < n; ++r) {
      Rational f = m[static_cast<size_t>(r * n + c)] / piv;
      if (f == 0) continue;
      for (int j = c; j < n; ++j) m[static_cast<size_t>(r * n + j)] -= f * m[static_cast<size_t>(c * n + j)];
    }
  }
  return det.get_num().get_si();
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      long v = x(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

std::vector<long> IntMatrix::apply(const std::vector<long>& v) const {
  std::vector<long> r(static_cast<size_t>(rows), 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
  return r;
}

AffineForm AffineForm::constant_form(int nvars, const Rational& c) {
  AffineForm f(nvars);
  f.constant = c;
  return f;
}

AffineForm AffineForm::variable(int nvars, int i, const Rational& scale) {
  AffineForm f(nvars);
  f.coeffs[static_cast<size_t>(i)] = scale;
  return f;
}

Rational AffineForm::evaluate(const std::vector<Rational>& x) const {
  Rational r = constant;
  for (size_t i = 0; i < coeffs.size(); ++i) r += coeffs[i] * x[i];
  return r;
}

AffineForm& AffineForm::operator+=(const AffineForm& o) {
  constant += o.constant;
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

AffineForm& AffineForm::operator-=(const AffineForm& o) {
  constant -= o.constant;
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

AffineForm& AffineForm::operator*=(const Rational& s) {
  constant *= s;
  for (auto& c : coeffs) c *= s;
  return *this;
}

AffineForm operator+(AffineForm a, const AffineForm& b) { return a += b; }
AffineForm operator-(AffineForm a, const AffineForm& b) { return a -= b; }
AffineForm operator*(const Rational& s, AffineForm a) { return a *= s; }

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
  MultiPoly p(nvars);
  p.add_term(Exponent(static_cast<size_t>(nvars), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int i) {
  Exponent e(static_cast<size_t>(nvars), 0);
  e[static_cast<size_t>(i)] = 1;
  return monomial(e);
}

MultiPoly MultiPoly::monomial(const Exponent& e, const Rational& c) {
  MultiPoly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

MultiPoly MultiPoly::from_affine(const AffineForm& f) {
  int n = static_cast<int>(f.coeffs.size());
  MultiPoly p = constant(n, f.constant);
  for (int i = 0; i < n; ++i) {
    if (f.coeffs[static_cast<size_t>(i)] != 0) {
      Exponent e(static_cast<size_t>(n), 0);
      e[static_cast<size_t>(i)] = 1;
      p.add_term(e, f.coeffs[static_cast<size_t>(i)]);
    }
  }
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Rational MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational MultiPoly::constant_term() const { return coefficient(Exponent(static_cast<size_t>(nvars_), 0)); }

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& p, const MultiPoly& q) {
  if (p.nvars_ != q.nvars_) throw std::invalid_argument("variable count mismatch");
  MultiPoly r(p.nvars_);
  Exponent e(static_cast<size_t>(p.nvars_));
  for (const auto& [ep, cp] : p.terms_)
    for (const auto& [eq, cq] : q.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ep[i] + eq[i];
      r.add_term(e, cp * cq);
    }
  return r;
}

MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
MultiPoly operator*(const Rational& s, MultiPoly p) { return p *= s; }

Rational MultiPoly::evaluate(const std::vector<Rational>& x) const {
  Rational r = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= corrbound::pow(x[i], static_cast<unsigned>(e[i]));
    r += t;
  }
  return r;
}

Interval MultiPoly::evaluate(const std::vector<Interval>& x) const {
  mpfr_prec_t prec = x.empty() ? kDefaultPrecision : x[0].precision();
  Interval r(prec);
  for (const auto& [e, c] : terms_) {
    Interval t(c, prec);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= corrbound::pow(x[i], static_cast<unsigned>(e[i]));
    r += t;
  }
  return r;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly r = constant(nvars_, 1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

MultiPoly MultiPoly::compose_linear(const IntMatrix& m) const {
  if (m.rows != nvars_ || m.cols != nvars_) throw std::invalid_argument("linear map shape mismatch");
  // Row i of m gives x_i -> sum_j m(i,j) x_j; cache powers of each image.
  std::vector<std::vector<MultiPoly>> powers(static_cast<size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    AffineForm f(nvars_);
    for (int j = 0; j < nvars_; ++j) f.coeffs[static_cast<size_t>(j)] = m(i, j);
    powers[static_cast<size_t>(i)].push_back(constant(nvars_, 1));
    powers[static_cast<size_t>(i)].push_back(from_affine(f));
  }
  auto get_pow = [&](int i, int k) -> const MultiPoly& {
    auto& v = powers[static_cast<size_t>(i)];
    while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * v[1]);
    return v[static_cast<size_t>(k)];
  };
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = constant(nvars_, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[static_cast<size_t>(i)] != 0) t = t * get_pow(i, e[static_cast<size_t>(i)]);
    r += t;
  }
  return r;
}

MultiPoly MultiPoly::substitute(int var, const AffineForm& f) const {
  if (f.references(var)) throw LimitOrderError("substituted form references its own variable");
  MultiPoly image = from_affine(f);
  std::vector<MultiPoly> powers{constant(nvars_, 1)};
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    int k = e[static_cast<size_t>(var)];
    while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * image);
    Exponent rest = e;
    rest[static_cast<size_t>(var)] = 0;
    r += monomial(rest, c) * powers[static_cast<size_t>(k)];
  }
  return r;
}

MultiPoly MultiPoly::antiderivative(int var) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    int k = ++f[static_cast<size_t>(var)];
    r.add_term(f, c / k);
  }
  return r;
}

MultiPoly MultiPoly::primitive() const {
  if (terms_.empty()) return *this;
  mpz_class g = 0, l = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  MultiPoly r = *this;
  r *= ratio(l, g);
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) os << "*x" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return os.str();
}

MultiPoly poly_integrate_iterated(const MultiPoly& p, const std::vector<IntegrationLimit>& limits) {
  std::vector<bool> done(static_cast<size_t>(p.nvars()), false);
  MultiPoly cur = p;
  for (const auto& lim : limits) {
    if (lim.var < 0 || lim.var >= p.nvars()) throw std::invalid_argument("limit variable out of range");
    if (done[static_cast<size_t>(lim.var)]) throw LimitOrderError("variable integrated twice");
    for (int v = 0; v < p.nvars(); ++v) {
      bool bad = (done[static_cast<size_t>(v)] || v == lim.var) &&
                 (lim.lower.references(v) || lim.upper.references(v));
      if (bad) throw LimitOrderError("integration limit references an already integrated variable");
    }
    MultiPoly anti = cur.antiderivative(lim.var);
    cur = anti.substitute(lim.var, lim.upper) - anti.substitute(lim.var, lim.lower);
    done[static_cast<size_t>(lim.var)] = true;
  }
  return cur;
}

MultiPoly poly_symmetrize(const MultiPoly& p, const std::vector<IntMatrix>& group_elements) {
  if (group_elements.empty()) throw std::invalid_argument("empty group");
  MultiPoly r(p.nvars());
  for (const auto& g : group_elements) r += p.compose_linear(g);
  r *= Rational(1, static_cast<long>(group_elements.size()));
  return r;
}

IntegrationLimit make_limit(int nvars, int var, const Rational& lo_const,
                            const std::vector<std::pair<int, Rational>>& lo_terms,
                            const Rational& hi_const,
                            const std::vector<std::pair<int, Rational>>& hi_terms) {
  IntegrationLimit l;
  l.var = var;
  l.lower = AffineForm::constant_form(nvars, lo_const);
  l.upper = AffineForm::constant_form(nvars, hi_const);
  for (const auto& [v, c] : lo_terms) l.lower.coeffs[static_cast<size_t>(v)] += c;
  for (const auto& [v, c] : hi_terms) l.upper.coeffs[static_cast<size_t>(v)] += c;
  return l;
}

}  // namespace corrbound
