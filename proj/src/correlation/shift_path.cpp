// Shift parametrization: lattice sums for nu_n(g_a g_b).
//
// Sampling points are y = N / D with D = m (m+1) n and N = m n I + k, so
// every coordinate of y - mu (mu integral) is an integer over D. Each term of
// the closed form of chi_H is trig(pi l(y)) times a rational function of
// degree -(n-1), hence
//     chi_H(y - mu) = pre pi^{-(n-1)} D^{n-1}
//                     sum_t coeff_t (-1)^{l_t(mu)} trig(pi l_t(N) / D) R_t(N - D mu)
// with R_t a ratio of integer products. The common factor is applied once at
// the end; trig values come from a table indexed by l_t(N) mod 2D.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "corrbound/correlation_functionals.hpp"
#include "corrbound/polytope_fourier.hpp"

namespace corrbound {

namespace {

long floor_mod(long a, long b) {
  long r = a % b;
  return r < 0 ? r + b : r;
}

long dot(const std::vector<long>& l, const long* v) {
  long s = 0;
  for (size_t i = 0; i < l.size(); ++i) s += l[i] * v[i];
  return s;
}

struct CompiledTerm {
  long coeff = 1;
  bool is_sin = false;
  std::vector<long> arg;
  std::vector<std::vector<long>> num_forms, den_forms;  // with multiplicity
};

// Per orbit and term: members with their sign (-1)^{l_t(mu)}, scaled by D.
struct OrbitTerm {
  std::vector<std::vector<long>> shifts;  // D mu
  std::vector<int> signs;
};

using Pair = std::pair<int, int>;

class LatticeEngine {
 public:
  LatticeEngine(int n, int m, const std::vector<ShiftOrbit>& orbits, const TruncationParams& t, mpfr_prec_t prec)
      : n_(n), k_(n - 1), m_(m), prec_(prec), orbits_(orbits) {
    t.validate(n, m);
    mn_ = static_cast<long>(m) * n;
    D_ = mn_ * (m + 1);
    kshift_ = t.shift;
    const TermFormula f = polytope_h_formula(n);
    prefactor_ = f.prefactor;
    for (const auto& term : f.terms) {
      CompiledTerm c;
      if (term.coeff.get_den() != 1) throw std::logic_error("non-integral term coefficient");
      c.coeff = term.coeff.get_num().get_si();
      c.is_sin = term.trig.at(0).is_sin;
      c.arg = term.trig.at(0).arg;
      for (const auto& [form, p] : term.factors)
        for (int r = 0; r < std::abs(p); ++r) (p > 0 ? c.num_forms : c.den_forms).push_back(form);
      terms_.push_back(std::move(c));
    }
    for (const auto& o : orbits_) {
      std::vector<OrbitTerm> per;
      for (const auto& term : terms_) {
        OrbitTerm ot;
        for (const auto& mu : o.members) {
          std::vector<long> s(mu.size());
          for (size_t i = 0; i < mu.size(); ++i) s[i] = D_ * mu[i];
          ot.shifts.push_back(std::move(s));
          ot.signs.push_back(floor_mod(dot(term.arg, mu.data()), 2) == 0 ? 1 : -1);
        }
        per.push_back(std::move(ot));
      }
      orbit_terms_.push_back(std::move(per));
    }
    const Interval pi = Interval::pi(prec);
    sin_.reserve(static_cast<size_t>(2 * D_));
    cos_.reserve(static_cast<size_t>(2 * D_));
    for (long j = 0; j < 2 * D_; ++j) {
      sin_.push_back(sin_pi(ratio(j, D_), prec));
      cos_.push_back(cos_pi(ratio(j, D_), prec));
    }
    inv_pi_ = Interval(1L, prec) / pi;
  }

  // pre pi^{-k} D^k, the common factor of every transform value.
  Interval global_factor() const {
    Interval f(prefactor_ * pow(Rational(D_), static_cast<unsigned>(k_)), prec_);
    for (int i = 0; i < k_; ++i) f *= inv_pi_;
    return f;
  }
  // Poisson normalization 1 / (m (m+1))^{n-1}.
  Rational normalization() const {
    return 1 / pow(Rational(static_cast<long>(m_) * (m_ + 1)), static_cast<unsigned>(k_));
  }
  long period() const { return 2 * (m_ + 1); }

  struct Scratch {
    explicit Scratch(mpfr_prec_t p, size_t norbits, int n)
        : bracket(p), term(p), tmp(p), w(p), prod(p), g(norbits, Interval(p)),
          sinc(static_cast<size_t>(n * n), Interval(p)) {}
    Interval bracket, term, tmp, w, prod;
    std::vector<Interval> g;
    std::vector<Interval> sinc;
    std::vector<long> z, x;
  };

  // Unscaled orbit transforms at N: g[o] = sum_mu chi_H(y - mu) / global.
  void orbit_values(const long* N, Scratch& s) const {
    s.z.resize(static_cast<size_t>(k_));
    for (size_t o = 0; o < orbits_.size(); ++o) {
      Interval& g = s.g[o];
      g.set_zero();
      for (size_t t = 0; t < terms_.size(); ++t) {
        const CompiledTerm& term = terms_[t];
        const OrbitTerm& ot = orbit_terms_[o][t];
        s.bracket.set_zero();
        for (size_t i = 0; i < ot.shifts.size(); ++i) {
          for (int c = 0; c < k_; ++c) s.z[static_cast<size_t>(c)] = N[c] - ot.shifts[i][static_cast<size_t>(c)];
          ratio_of_products(term, s.z.data(), ot.signs[i], s.tmp);
          s.bracket += s.tmp;
        }
        const long j = floor_mod(dot(term.arg, N), 2 * D_);
        s.term.set_product(term.is_sin ? sin_[static_cast<size_t>(j)] : cos_[static_cast<size_t>(j)], s.bracket);
        if (term.coeff != 1) s.term.mul_long(term.coeff);
        g += s.term;
      }
    }
  }

  // W_n(m y, 0) at y = N / D.
  void weight(const long* N, Scratch& s) const {
    std::vector<long>& x = s.x;
    x.assign(static_cast<size_t>(n_), 0);
    for (int i = 0; i < k_; ++i) x[static_cast<size_t>(i)] = N[i];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        Interval& e = s.sinc[static_cast<size_t>(i * n_ + j)];
        if (i == j) {
          e = Interval(1L, prec_);
          continue;
        }
        if (j < i) {
          e = s.sinc[static_cast<size_t>(j * n_ + i)];
          continue;
        }
        const long delta = m_ * (x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]);
        // sinc(delta / D) = sin(pi delta / D) D / (pi delta)
        e.set_scaled(sin_[static_cast<size_t>(floor_mod(delta, 2 * D_))], D_, delta);
        e *= inv_pi_;
      }
    determinant(s);
  }

  // Sums over the ring max|I_i| = c of g_a g_b W for every pair.
  void ring(long c, const std::vector<Pair>& pairs, std::vector<Interval>& out, Scratch& s) const {
    out.assign(pairs.size(), Interval(prec_));
    std::vector<long> I(static_cast<size_t>(k_), -c), N(static_cast<size_t>(k_));
    while (true) {
      long mx = 0;
      for (long v : I) mx = std::max(mx, std::labs(v));
      if (mx == c) {
        for (int i = 0; i < k_; ++i) N[static_cast<size_t>(i)] = mn_ * I[static_cast<size_t>(i)] + kshift_[static_cast<size_t>(i)];
        orbit_values(N.data(), s);
        weight(N.data(), s);
        for (size_t p = 0; p < pairs.size(); ++p) {
          s.prod.set_product(s.g[static_cast<size_t>(pairs[p].first)], s.g[static_cast<size_t>(pairs[p].second)]);
          s.tmp.set_product(s.prod, s.w);
          out[p] += s.tmp;
        }
      }
      // Next point of the cube; skip interior runs of the last coordinate.
      int pos = k_ - 1;
      while (pos >= 0) {
        long& v = I[static_cast<size_t>(pos)];
        bool inner_all = true;
        for (int q = 0; q < pos; ++q) inner_all = inner_all && std::labs(I[static_cast<size_t>(q)]) < c;
        if (pos == k_ - 1 && inner_all && v == -c && c > 0) {
          v = c;
          break;
        }
        if (v < c) {
          ++v;
          break;
        }
        v = -c;
        --pos;
      }
      if (pos < 0) break;
    }
  }

  mpfr_prec_t precision() const { return prec_; }
  size_t orbit_count() const { return orbits_.size(); }
  int dim() const { return n_; }

 private:
  void ratio_of_products(const CompiledTerm& t, const long* z, int sign, Interval& out) const {
    __int128 num = sign, den = 1;
    for (const auto& f : t.num_forms) num *= dot(f, z);
    for (const auto& f : t.den_forms) den *= dot(f, z);
    constexpr __int128 lim = static_cast<__int128>(1) << 62;
    if (num < lim && num > -lim && den < lim && den > -lim) {
      out.set_ratio(static_cast<long>(num), static_cast<long>(den));
      return;
    }
    Integer a = 1, b = 1;
    a *= sign;
    for (const auto& f : t.num_forms) a *= dot(f, z);
    for (const auto& f : t.den_forms) b *= dot(f, z);
    out = Interval(ratio(a, b), prec_);
  }

  // det of the symmetric sinc matrix by the Leibniz expansion (n <= 4).
  void determinant(Scratch& s) const {
    std::vector<int> perm(static_cast<size_t>(n_));
    std::iota(perm.begin(), perm.end(), 0);
    s.w.set_zero();
    do {
      int inversions = 0;
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) inversions += perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)];
      bool first = true;
      for (int i = 0; i < n_; ++i) {
        if (perm[static_cast<size_t>(i)] == i) continue;
        const Interval& e = s.sinc[static_cast<size_t>(i * n_ + perm[static_cast<size_t>(i)])];
        if (first) {
          s.prod = e;
          first = false;
        } else {
          s.tmp.set_product(s.prod, e);
          std::swap(s.prod, s.tmp);
        }
      }
      if (first) s.prod = Interval(1L, prec_);
      if (inversions % 2) {
        s.w -= s.prod;
      } else {
        s.w += s.prod;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  int n_, k_, m_;
  mpfr_prec_t prec_;
  long mn_ = 0, D_ = 0;
  std::vector<long> kshift_;
  Rational prefactor_;
  std::vector<ShiftOrbit> orbits_;
  std::vector<CompiledTerm> terms_;
  std::vector<std::vector<OrbitTerm>> orbit_terms_;
  std::vector<Interval> sin_, cos_;
  Interval inv_pi_;
};

// Ring sums for the listed rings, computed by `workers` threads that take
// rings from a shared counter; each ring's result lands in its own slot.
std::vector<std::vector<Interval>> ring_table(const LatticeEngine& e, const std::vector<Pair>& pairs,
                                              const std::vector<long>& rings, int workers) {
  std::vector<std::vector<Interval>> out(rings.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    LatticeEngine::Scratch s(e.precision(), e.orbit_count(), e.dim());
    for (size_t i = next++; i < rings.size(); i = next++) e.ring(rings[i], pairs, out[i], s);
  };
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<size_t>(static_cast<size_t>(workers), std::max<size_t>(rings.size(), 1)));
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

// sum_{c > C, c = rho mod p} C^k / c^{k+2}: direct to a cutoff, then the
// integral bound of the remainder.
long double zeta_tail(long C, long rho, long p, int k) {
  constexpr long cutoff = 1000000;
  long double s = 0;
  long c = C + 1;
  c += floor_mod(rho - c, p);
  const long double Cl = static_cast<long double>(C);
  for (; c <= cutoff; c += p) {
    const long double t = Cl / c;
    s += std::pow(t, k) / (static_cast<long double>(c) * c);
  }
  const long double cl = static_cast<long double>(std::max(c, cutoff));
  s += std::pow(Cl / cl, k) / ((k + 1) * static_cast<long double>(p) * cl);
  return s;
}

// Least-squares fit of y = sum_{j<K} a_j t^j; returns sum_j a_j z_j.
long double fit_and_extrapolate(const std::vector<long double>& t, const std::vector<long double>& y, int K,
                                const std::vector<long double>& z) {
  std::vector<std::vector<long double>> M(static_cast<size_t>(K), std::vector<long double>(static_cast<size_t>(K) + 1, 0));
  for (size_t i = 0; i < t.size(); ++i) {
    std::vector<long double> pw(static_cast<size_t>(K));
    pw[0] = 1;
    for (int j = 1; j < K; ++j) pw[static_cast<size_t>(j)] = pw[static_cast<size_t>(j - 1)] * t[i];
    for (int r = 0; r < K; ++r) {
      for (int c = 0; c < K; ++c) M[static_cast<size_t>(r)][static_cast<size_t>(c)] += pw[static_cast<size_t>(r)] * pw[static_cast<size_t>(c)];
      M[static_cast<size_t>(r)][static_cast<size_t>(K)] += pw[static_cast<size_t>(r)] * y[i];
    }
  }
  for (int c = 0; c < K; ++c) {
    int piv = c;
    for (int r = c + 1; r < K; ++r)
      if (std::fabs(M[static_cast<size_t>(r)][static_cast<size_t>(c)]) > std::fabs(M[static_cast<size_t>(piv)][static_cast<size_t>(c)])) piv = r;
    std::swap(M[static_cast<size_t>(c)], M[static_cast<size_t>(piv)]);
    const long double d = M[static_cast<size_t>(c)][static_cast<size_t>(c)];
    if (d == 0) throw std::runtime_error("degenerate tail fit");
    for (int r = 0; r < K; ++r) {
      if (r == c) continue;
      const long double f = M[static_cast<size_t>(r)][static_cast<size_t>(c)] / d;
      for (int q = c; q <= K; ++q) M[static_cast<size_t>(r)][static_cast<size_t>(q)] -= f * M[static_cast<size_t>(c)][static_cast<size_t>(q)];
    }
  }
  long double s = 0;
  for (int j = 0; j < K; ++j) s += M[static_cast<size_t>(j)][static_cast<size_t>(K)] / M[static_cast<size_t>(j)][static_cast<size_t>(j)] * z[static_cast<size_t>(j)];
  return s;
}

constexpr int kMaxFitTerms = 5;

struct RingData {
  long C = 0, period = 1;
  std::vector<long> rings;                 // base rings 0..C, then probes
  std::vector<std::vector<Interval>> sums;  // per ring, per pair
  // Nested boxes C, 3C/4, C/2: each refits the tail from its own window and
  // the shared probes. The spread of the resulting totals measures the bias
  // of the fit.
  std::vector<long> boxes;
  std::vector<std::vector<std::vector<long double>>> zeta;  // per box, residue, power
};

// Tail of sum_{c > B} r(c) for the box B = d.boxes[box], from
// c^2 r(c) ~ sum_j a_j (B/c)^j per residue class of c modulo the period,
// fitted on the rings B/2 <= c <= B and the probes. Returns (T_K, T_{K-1}).
std::pair<long double, long double> tail_estimate(const RingData& d, size_t pair, size_t box) {
  const long B = d.boxes[box];
  long double tk = 0, tk1 = 0;
  for (long rho = 0; rho < d.period; ++rho) {
    std::vector<long double> t, y;
    for (size_t i = 0; i < d.rings.size(); ++i) {
      const long c = d.rings[i];
      if (c == 0 || floor_mod(c - rho, d.period) != 0) continue;
      if (c <= d.C && (2 * c < B || c > B)) continue;
      const long double r = static_cast<long double>(d.sums[i][pair].mid_double());
      t.push_back(static_cast<long double>(B) / c);
      y.push_back(r * c * c);
    }
    if (t.empty()) continue;
    const int K = static_cast<int>(std::min<size_t>(kMaxFitTerms, t.size() > 1 ? t.size() - 1 : 1));
    const auto& z = d.zeta[box][static_cast<size_t>(rho)];
    tk += fit_and_extrapolate(t, y, K, z);
    tk1 += K > 1 ? fit_and_extrapolate(t, y, K - 1, z) : fit_and_extrapolate(t, y, K, z);
  }
  return {tk, tk1};
}

RingData collect(const LatticeEngine& base, const LatticeEngine& probe, const std::vector<Pair>& pairs,
                 const TruncationParams& t, int workers) {
  RingData d;
  d.C = t.C;
  d.period = base.period();
  for (long c = 0; c <= t.C; ++c) d.rings.push_back(c);
  d.sums = ring_table(base, pairs, d.rings, workers);
  const long per = t.probe_rings > 0 ? t.probe_rings : d.period;
  std::vector<long> probes;
  // Ring sizes grow like c^{n-2}; for n >= 4 the 8C probes would dominate
  // the whole run, and 2C, 4C already pin the fit.
  const std::vector<long> scales = base.dim() <= 3 ? std::vector<long>{2, 4, 8} : std::vector<long>{2, 4};
  for (long scale : scales)
    for (long c = scale * t.C; c < scale * t.C + per; ++c) probes.push_back(c);
  auto extra = ring_table(probe, pairs, probes, workers);
  d.rings.insert(d.rings.end(), probes.begin(), probes.end());
  d.sums.insert(d.sums.end(), extra.begin(), extra.end());
  d.boxes = {t.C, (3 * t.C) / 4};
  for (long B : d.boxes) {
    std::vector<std::vector<long double>> per_box;
    for (long rho = 0; rho < d.period; ++rho) {
      std::vector<long double> z;
      for (int j = 0; j < kMaxFitTerms; ++j) z.push_back(zeta_tail(B, rho, d.period, j));
      per_box.push_back(std::move(z));
    }
    d.zeta.push_back(std::move(per_box));
  }
  return d;
}

Interval finish_entry(const LatticeEngine& e, const RingData& d, size_t pair, double scale_ref, double tolerance,
                      TailReport& report) {
  Interval s(e.precision());
  for (size_t i = 0; i < d.rings.size(); ++i)
    if (d.rings[i] <= d.C) s += d.sums[i][pair];
  const auto [tk, tk1] = tail_estimate(d, pair, 0);
  long double spread = std::fabs(tk - tk1);
  // Totals of the smaller boxes; the exact sum does not depend on the box.
  long double full = tk;
  for (size_t i = 0; i < d.rings.size(); ++i)
    if (d.rings[i] <= d.C) full += static_cast<long double>(d.sums[i][pair].mid_double());
  for (size_t box = 1; box < d.boxes.size(); ++box) {
    long double total = tail_estimate(d, pair, box).first;
    for (size_t i = 0; i < d.rings.size(); ++i)
      if (d.rings[i] <= d.boxes[box]) total += static_cast<long double>(d.sums[i][pair].mid_double());
    spread = std::max(spread, std::fabs(full - total));
  }
  const double uncertainty = 10.0 * static_cast<double>(spread);
  Interval tail = Interval::from_double(static_cast<double>(tk), e.precision());
  tail.add_error(uncertainty);
  tail.add_error(std::fabs(static_cast<double>(tk)) * 1e-15);  // long double to double
  s += tail;
  const Interval g = e.global_factor();
  Interval out = s * g * g * Interval(e.normalization(), e.precision());
  const double gn = (g * g * Interval(e.normalization(), e.precision())).mid_double();
  report.truncated_mid = (out.mid_double() - static_cast<double>(tk) * gn);
  report.tail = static_cast<double>(tk) * gn;
  report.tail_uncertainty = uncertainty * std::fabs(gn);
  const double ref = std::fabs(scale_ref * gn);
  if (ref > 0 && report.tail_uncertainty > tolerance * ref) {
    throw TailToleranceError("tail uncertainty " + std::to_string(report.tail_uncertainty / ref) +
                                 " exceeds the relative tolerance; increase C",
                             report.tail_uncertainty / ref);
  }
  return out;
}

LatticeEngine probe_engine(int n, int m, const std::vector<ShiftOrbit>& basis, const TruncationParams& t) {
  // The probe rings only feed the tail fit, so low precision suffices.
  return LatticeEngine(n, m, basis, t, 64);
}

}  // namespace

TruncationParams TruncationParams::make(int n, int m, long C, std::vector<long> shift, double tail_tolerance) {
  TruncationParams t;
  t.C = C;
  if (shift.empty())
    for (int i = 0; i < n - 1; ++i) shift.push_back(i + 1);
  t.shift = std::move(shift);
  t.tail_tolerance = tail_tolerance;
  t.validate(n, m);
  return t;
}

void TruncationParams::validate(int n, int m) const {
  if (n < 2 || n > 4) throw InvalidShiftError("shift path supports 2 <= n <= 4");
  if (m < 1) throw InvalidShiftError("m must be positive");
  if (C < 2) throw InvalidShiftError("C must be at least 2");
  if (static_cast<int>(shift.size()) != n - 1) throw InvalidShiftError("shift needs n - 1 entries");
  // y_i - mu_i = (m n I_i + k_i) / D - mu_i vanishes only if m n | k_i, and
  // two such coordinates coincide only if k_i = k_j mod m n.
  const long mn = static_cast<long>(m) * n;
  for (size_t i = 0; i < shift.size(); ++i) {
    if (floor_mod(shift[i], mn) == 0) throw InvalidShiftError("shift entry divisible by m n gives singular points");
    for (size_t j = i + 1; j < shift.size(); ++j)
      if (floor_mod(shift[i] - shift[j], mn) == 0)
        throw InvalidShiftError("shift entries congruent modulo m n give singular points");
  }
}

std::vector<Rational> TruncationParams::shift_vector(int n, int m) const {
  std::vector<Rational> s;
  for (long k : shift) s.push_back(ratio(k, static_cast<long>(m) * (m + 1) * n));
  return s;
}

Interval w_eval(int n, const std::vector<Scalar>& x, mpfr_prec_t prec) {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("w_eval needs n coordinates");
  std::vector<Interval> e(static_cast<size_t>(n * n), Interval(prec));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        e[static_cast<size_t>(i * n + j)] = Interval(1L, prec);
        continue;
      }
      Scalar d = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      e[static_cast<size_t>(i * n + j)] = sinc_pi(d.to_interval(prec));
    }
  // Gaussian elimination without pivoting is fine for tiny n; use the
  // Leibniz sum for exactness of structure.
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Interval det(prec);
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)];
    Interval p(1L, prec);
    for (int i = 0; i < n; ++i) p *= e[static_cast<size_t>(i * n + perm[static_cast<size_t>(i)])];
    if (inv % 2) {
      det -= p;
    } else {
      det += p;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

std::vector<Interval> b_shift(int n, int m, const std::vector<ShiftOrbit>& basis, mpfr_prec_t prec) {
  std::vector<Interval> b;
  const Rational scale = ratio(1, m);
  for (const auto& o : basis) {
    Interval s(prec);
    for (const auto& mu : o.members) {
      std::vector<Scalar> y;
      for (long v : mu) y.emplace_back(Rational(-static_cast<long>(m) * v));
      s += ft_H(n, scale, y, prec);
    }
    b.push_back(s);
  }
  return b;
}

Interval shift_basis_value(int n, const ShiftOrbit& orbit, const std::vector<Rational>& y, mpfr_prec_t prec) {
  Interval s(prec);
  for (const auto& mu : orbit.members) {
    std::vector<Scalar> z;
    for (size_t i = 0; i < y.size(); ++i) z.emplace_back(y[i] - mu[i]);
    s += ft_H(n, 1, z, prec);
  }
  return s;
}

ShiftGram shift_gram(int n, int m, const std::vector<ShiftOrbit>& basis, const TruncationParams& t,
                     mpfr_prec_t prec, int workers) {
  LatticeEngine base(n, m, basis, t, prec);
  LatticeEngine probe = probe_engine(n, m, basis, t);
  const size_t nb = basis.size();
  std::vector<Pair> pairs;
  for (size_t a = 0; a < nb; ++a)
    for (size_t b = a; b < nb; ++b) pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
  RingData d = collect(base, probe, pairs, t, workers);

  std::vector<double> diag(nb, 0);
  for (size_t p = 0; p < pairs.size(); ++p)
    if (pairs[p].first == pairs[p].second) {
      double s = 0;
      for (size_t i = 0; i < d.rings.size(); ++i)
        if (d.rings[i] <= d.C) s += d.sums[i][p].mid_double();
      diag[static_cast<size_t>(pairs[p].first)] = s;
    }

  ShiftGram g;
  g.A.assign(nb, std::vector<Interval>(nb, Interval(prec)));
  g.tails.assign(nb, std::vector<TailReport>(nb));
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [a, b] = pairs[p];
    const double ref = std::sqrt(std::fabs(diag[static_cast<size_t>(a)] * diag[static_cast<size_t>(b)]));
    TailReport rep;
    Interval v(prec);
    try {
      v = finish_entry(base, d, p, ref, t.tail_tolerance, rep);
    } catch (const TailToleranceError& e) {
      throw TailToleranceError("entry (" + std::to_string(a) + "," + std::to_string(b) + "): " + e.what(),
                               e.achieved());
    }
    g.A[static_cast<size_t>(a)][static_cast<size_t>(b)] = v;
    g.A[static_cast<size_t>(b)][static_cast<size_t>(a)] = v;
    g.tails[static_cast<size_t>(a)][static_cast<size_t>(b)] = rep;
    g.tails[static_cast<size_t>(b)][static_cast<size_t>(a)] = rep;
  }
  g.b = b_shift(n, m, basis, prec);
  return g;
}

Interval nu_shift(int n, int m, const ShiftOrbit& a, const ShiftOrbit& b, const TruncationParams& t,
                  mpfr_prec_t prec, int workers) {
  std::vector<ShiftOrbit> basis{a, b};
  LatticeEngine base(n, m, basis, t, prec);
  LatticeEngine probe = probe_engine(n, m, basis, t);
  const std::vector<Pair> pairs{{0, 0}, {1, 1}, {0, 1}};
  RingData d = collect(base, probe, pairs, t, workers);
  double diag[2] = {0, 0};
  for (size_t i = 0; i < d.rings.size(); ++i)
    if (d.rings[i] <= d.C)
      for (int q = 0; q < 2; ++q) diag[q] += d.sums[i][static_cast<size_t>(q)].mid_double();
  TailReport rep;
  return finish_entry(base, d, 2, std::sqrt(std::fabs(diag[0] * diag[1])), t.tail_tolerance, rep);
}

std::vector<Interval> shift_ring_sums(int n, int m, const ShiftOrbit& a, const ShiftOrbit& b,
                                      const TruncationParams& t, long c_max, mpfr_prec_t prec) {
  std::vector<ShiftOrbit> basis{a, b};
  LatticeEngine e(n, m, basis, t, prec);
  std::vector<long> rings;
  for (long c = 0; c <= c_max; ++c) rings.push_back(c);
  auto sums = ring_table(e, {{0, 1}}, rings, 1);
  const Interval g = e.global_factor();
  const Interval f = g * g * Interval(e.normalization(), prec);
  std::vector<Interval> out;
  for (auto& r : sums) out.push_back(r[0] * f);
  return out;
}

}  // namespace corrbound
