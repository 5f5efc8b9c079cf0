#include "corrbound/bound_solver.hpp"

#include <json.hpp>

namespace corrbound {

namespace {

enum class PivotKind { positive, vanishing, negative };

PivotKind classify(const Scalar& p) {
  if (p.is_exact()) {
    const int s = sgn(p.rational());
    return s > 0 ? PivotKind::positive : (s == 0 ? PivotKind::vanishing : PivotKind::negative);
  }
  const Interval x = p.to_interval(p.precision_or(kDefaultPrecision));
  if (x.is_positive()) return PivotKind::positive;
  if (x.is_negative()) return PivotKind::negative;
  return PivotKind::vanishing;
}

double pivot_size(const Scalar& p) { return p.to_interval(53).mid_double(); }

Rational floor_scaled(const Rational& q, int decimals) {
  const Rational scale = pow(Rational(10), static_cast<unsigned>(decimals));
  Rational s = q * scale;
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
  return Rational(f);
}

std::string fixed(const Rational& scaled_integer, int decimals) {
  Integer v = scaled_integer.get_num();
  const bool neg = v < 0;
  if (neg) v = -v;
  std::string digits = v.get_str();
  if (static_cast<int>(digits.size()) <= decimals) digits.insert(0, static_cast<size_t>(decimals) + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - static_cast<size_t>(decimals));
  if (decimals > 0) out += "." + digits.substr(digits.size() - static_cast<size_t>(decimals));
  return neg ? "-" + out : out;
}

Rational upper_end(const Scalar& x) {
  return x.is_exact() ? x.rational() : x.to_interval(x.precision_or(kDefaultPrecision)).upper_rational();
}
Rational lower_end(const Scalar& x) {
  return x.is_exact() ? x.rational() : x.to_interval(x.precision_or(kDefaultPrecision)).lower_rational();
}

nlohmann::json scalar_json(const Scalar& x, mpfr_prec_t prec) {
  const Interval v = x.to_interval(prec);
  nlohmann::json j = {{"mid", v.mid_string()}, {"rad", v.rad_string()}};
  if (x.is_exact()) j["exact"] = to_string(x.rational());
  return j;
}

}  // namespace

RankOneSolution solve_rank1(const std::vector<std::vector<Scalar>>& A, const std::vector<Scalar>& b,
                            mpfr_prec_t prec) {
  const size_t n = b.size();
  if (A.size() != n) throw std::invalid_argument("A and b sizes differ");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("A is not square");
  (void)prec;

  // Augmented working copy; eliminated rows are kept for back substitution.
  std::vector<std::vector<Scalar>> M(n, std::vector<Scalar>(n + 1));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n] = b[i];
  }
  RankOneSolution sol;
  std::vector<bool> active(n, true);
  std::vector<size_t> order;
  for (size_t step = 0; step < n; ++step) {
    size_t piv = n;
    for (size_t i = 0; i < n; ++i)
      if (active[i] && (piv == n || pivot_size(M[i][i]) > pivot_size(M[piv][piv]))) piv = i;
    active[piv] = false;
    switch (classify(M[piv][piv])) {
      case PivotKind::negative:
        throw SingularSystemError("negative pivot at basis element " + std::to_string(piv) +
                                  ": A is not positive semidefinite within its enclosures");
      case PivotKind::vanishing:
        sol.dropped.push_back(piv);
        continue;
      case PivotKind::positive:
        break;
    }
    order.push_back(piv);
    sol.pivots.push_back(M[piv][piv]);
    for (size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const Scalar f = M[i][piv] / M[piv][piv];
      for (size_t j = 0; j <= n; ++j) {
        bool live = j == n || active[j] || j == piv;
        if (live) M[i][j] -= f * M[piv][j];
      }
    }
  }
  if (order.empty()) throw SingularSystemError("every pivot vanishes; raise the precision or C");
  std::sort(sol.dropped.begin(), sol.dropped.end());

  sol.c.assign(n, Scalar());
  for (size_t k = order.size(); k-- > 0;) {
    const size_t r = order[k];
    Scalar s = M[r][n];
    for (size_t q = k + 1; q < order.size(); ++q) s -= M[r][order[q]] * sol.c[order[q]];
    sol.c[r] = s / M[r][r];
  }
  return sol;
}

RankOneSolution solve_rank1(const GramSystem& sys) { return solve_rank1(sys.A, sys.b, sys.meta.prec); }

std::vector<Scalar> rational_coefficients(const std::vector<Scalar>& c) {
  std::vector<Scalar> out;
  for (const auto& x : c)
    out.emplace_back(x.is_exact() ? x.rational() : x.to_interval(x.precision_or(kDefaultPrecision)).mid_rational());
  return out;
}

Scalar quadratic_bound(const std::vector<std::vector<Scalar>>& A, const std::vector<Scalar>& b,
                       const std::vector<Scalar>& c, mpfr_prec_t prec) {
  if (c.size() != b.size()) throw std::invalid_argument("coefficient vector has the wrong length");
  Scalar cb = 0, cac = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    cb += c[i] * b[i];
    Scalar row = 0;
    for (size_t j = 0; j < c.size(); ++j)
      if (!c[j].is_zero()) row += A[i][j] * c[j];
    cac += c[i] * row;
  }
  const bool vanishes = cb.is_exact() ? cb.rational() == 0 : cb.to_interval(prec).contains_zero();
  if (vanishes) throw NormalizationError("c^T b encloses 0; the coefficients do not normalize g(0)");
  return cac / (cb * cb);
}

Scalar fraction_bound(int n, const Scalar& bound, mpfr_prec_t prec) {
  if (n < 2) throw std::invalid_argument("fraction bound needs n >= 2");
  const Rational f = factorial(static_cast<unsigned>(n - 1));
  if (bound.is_exact()) return Scalar(1 - bound.rational() / f);
  return Scalar(Interval(1L, prec) - bound.to_interval(prec) / Interval(f, prec));
}

BoundCertificate certify_bound(const GramSystem& sys, const std::vector<Scalar>& c) {
  BoundCertificate cert;
  cert.meta = sys.meta;
  cert.basis_labels = sys.basis_labels;
  cert.c = c;
  cert.bound = quadratic_bound(sys.A, sys.b, c, sys.meta.prec);
  cert.fraction = fraction_bound(sys.meta.n, cert.bound, sys.meta.prec);
  return cert;
}

BoundCertificate optimal_bound(const GramSystem& sys) {
  RankOneSolution sol = solve_rank1(sys);
  BoundCertificate cert = certify_bound(sys, rational_coefficients(sol.c));
  cert.dropped = sol.dropped;
  return cert;
}

std::string decimal_up(const Scalar& x, int decimals) {
  const Rational u = -upper_end(x);
  return fixed(-floor_scaled(u, decimals), decimals);
}

std::string decimal_down(const Scalar& x, int decimals) { return fixed(floor_scaled(lower_end(x), decimals), decimals); }

std::string certificate_json(const BoundCertificate& cert) {
  using nlohmann::json;
  const GramMeta& m = cert.meta;
  json meta = {{"key", m.key()},
               {"n", m.n},
               {"m", m.m},
               {"parametrization", m.param == Parametrization::poly ? "poly" : "shift"},
               {"d", m.d},
               {"precision", m.prec}};
  if (m.trunc) {
    meta["C"] = m.trunc->C;
    meta["shift"] = m.trunc->shift;
    json s = json::array();
    for (const auto& q : m.trunc->shift_vector(m.n, m.m)) s.push_back(to_string(q));
    meta["shift_rational"] = s;
    meta["tail_tolerance"] = m.trunc->tail_tolerance;
    meta["probe_rings"] = m.trunc->probe_rings;
  }
  json c = json::array();
  for (const auto& x : cert.c) c.push_back(x.is_exact() ? to_string(x.rational()) : x.to_string(40));
  json out = {{"meta", meta},
              {"basis", cert.basis_labels},
              {"c", c},
              {"dropped", cert.dropped},
              {"bound", scalar_json(cert.bound, m.prec)},
              {"bound_upper_9", decimal_up(cert.bound, 9)},
              {"fraction", scalar_json(cert.fraction, m.prec)},
              {"fraction_lower_4", decimal_down(cert.fraction, 4)}};
  return out.dump(2);
}

}  // namespace corrbound
