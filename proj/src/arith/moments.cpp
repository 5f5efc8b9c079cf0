#include "corrbound/arith/moments.hpp"

#include <stdexcept>

namespace corrbound {

DegreeIndex::DegreeIndex(int r, int dmax, bool with_successors) : r_(r), dmax_(dmax) {
  if (r < 0 || dmax < 0) throw std::invalid_argument("bad degree index shape");
  int nmax = dmax + r + 2;
  binom_.assign(static_cast<size_t>(nmax + 1), std::vector<long long>(static_cast<size_t>(r + 2), 0));
  for (int n = 0; n <= nmax; ++n) {
    binom_[static_cast<size_t>(n)][0] = 1;
    for (int k = 1; k <= r + 1 && k <= n; ++k)
      binom_[static_cast<size_t>(n)][static_cast<size_t>(k)] =
          binom_[static_cast<size_t>(n - 1)][static_cast<size_t>(k - 1)] +
          (k <= n - 1 ? binom_[static_cast<size_t>(n - 1)][static_cast<size_t>(k)] : 0);
  }
  size_ = static_cast<size_t>(binom(dmax + r, r));
  exps_.assign(size_ * static_cast<size_t>(r), 0);
  deg_.assign(size_, 0);
  // Lexicographic enumeration with the first coordinate most significant.
  std::vector<int> e(static_cast<size_t>(r), 0);
  for (size_t idx = 0; idx < size_; ++idx) {
    int d = 0;
    for (int i = 0; i < r; ++i) {
      exps_[idx * static_cast<size_t>(r) + static_cast<size_t>(i)] = e[static_cast<size_t>(i)];
      d += e[static_cast<size_t>(i)];
    }
    deg_[idx] = d;
    // advance: increment the last coordinate that has room, zero the rest
    for (int i = r - 1; i >= 0; --i) {
      int prefix = 0;
      for (int j = 0; j < i; ++j) prefix += e[static_cast<size_t>(j)];
      if (prefix + e[static_cast<size_t>(i)] < dmax) {
        ++e[static_cast<size_t>(i)];
        for (int j = i + 1; j < r; ++j) e[static_cast<size_t>(j)] = 0;
        break;
      }
    }
  }
  if (with_successors) {
    succ_.assign(static_cast<size_t>(r), std::vector<size_t>(size_, 0));
    std::vector<int> f(static_cast<size_t>(r));
    for (size_t idx = 0; idx < size_; ++idx) {
      if (deg_[idx] >= dmax) continue;
      for (int v = 0; v < r; ++v) {
        for (int i = 0; i < r; ++i) f[static_cast<size_t>(i)] = exps_[idx * static_cast<size_t>(r) + static_cast<size_t>(i)];
        ++f[static_cast<size_t>(v)];
        succ_[static_cast<size_t>(v)][idx] = index(f.data());
      }
    }
  }
}

long long DegreeIndex::binom(int n, int k) const {
  if (k < 0 || n < 0 || k > n) return 0;
  return binom_[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

size_t DegreeIndex::index(const int* e) const {
  long long idx = 0;
  int s = dmax_;
  for (int i = 0; i < r_; ++i) {
    int ri = r_ - i - 1;
    idx += binom(s + ri + 1, ri + 1) - binom(s - e[i] + ri + 1, ri + 1);
    s -= e[i];
  }
  return static_cast<size_t>(idx);
}

namespace {

void addmul_small(Integer& dst, const Integer& src, long c) {
  if (c > 0) {
    mpz_addmul_ui(dst.get_mpz_t(), src.get_mpz_t(), static_cast<unsigned long>(c));
  } else if (c < 0) {
    mpz_submul_ui(dst.get_mpz_t(), src.get_mpz_t(), static_cast<unsigned long>(-c));
  }
}

Integer lcm_upto(int n) {
  Integer l = 1;
  for (int i = 2; i <= n; ++i) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(i));
  return l;
}

// Affine bound as small integers after scaling the coordinates by s.
struct ScaledBound {
  long c0 = 0;
  std::vector<long> c;  // per local coordinate of the outer variables
};

long small_int(const Rational& q, const char* what) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
    throw std::invalid_argument(std::string("moment table needs small integer ") + what);
  }
  return q.get_num().get_si();
}

}  // namespace

MomentTable MomentTable::over_region(int nvars, const std::vector<IntegrationLimit>& limits,
                                     int max_degree, const Keep& keep) {
  const int k = static_cast<int>(limits.size());
  if (k != nvars) throw std::invalid_argument("every variable must be integrated exactly once");
  std::vector<int> order(static_cast<size_t>(k));
  std::vector<bool> seen(static_cast<size_t>(k), false);
  for (int l = 0; l < k; ++l) {
    int v = limits[static_cast<size_t>(l)].var;
    if (v < 0 || v >= k || seen[static_cast<size_t>(v)]) throw std::invalid_argument("bad limit variable");
    seen[static_cast<size_t>(v)] = true;
    order[static_cast<size_t>(l)] = v;
  }
  // Bounds of step l may only involve variables of later (outer) steps.
  for (int l = 0; l < k; ++l) {
    const auto& lim = limits[static_cast<size_t>(l)];
    for (int inner = 0; inner <= l; ++inner) {
      int v = order[static_cast<size_t>(inner)];
      if (lim.lower.references(v) || lim.upper.references(v)) {
        throw LimitOrderError("integration limit references an already integrated variable");
      }
    }
  }
  // Coordinate scale making all constants integral.
  Integer s = 1;
  for (const auto& lim : limits) {
    mpz_lcm(s.get_mpz_t(), s.get_mpz_t(), lim.lower.constant.get_den_mpz_t());
    mpz_lcm(s.get_mpz_t(), s.get_mpz_t(), lim.upper.constant.get_den_mpz_t());
  }
  if (!s.fits_slong_p()) throw std::invalid_argument("limit constants too large");
  const long scale = s.get_si();

  auto scaled = [&](const AffineForm& f, int level) {
    ScaledBound b;
    b.c0 = small_int(f.constant * scale, "constants");
    for (int t = level + 1; t < k; ++t) b.c.push_back(small_int(f.coeffs[static_cast<size_t>(order[static_cast<size_t>(t)])], "coefficients"));
    return b;
  };

  MomentTable out;
  out.nvars_ = nvars;
  out.max_degree_ = max_degree;
  out.scale_ = scale;
  out.index_ = DegreeIndex(nvars, max_degree, false);
  out.num_.assign(out.index_.size(), Integer(0));
  out.kept_.assign(out.index_.size(), 0);
  out.den_ = 1;

  // Table of the already integrated outer block, in local coordinates
  // (order[l+1], ..., order[k-1]).
  DegreeIndex prev_index(0, max_degree + k);
  std::vector<Integer> prev_num(1, Integer(1));

  std::vector<int> local(static_cast<size_t>(k)), orig(static_cast<size_t>(k));
  for (int l = k - 1; l >= 0; --l) {
    const int dl = max_degree + l;
    const int r = k - l;
    const Integer lcm = lcm_upto(dl + 1);
    const ScaledBound up = scaled(limits[static_cast<size_t>(l)].upper, l);
    const ScaledBound lo = scaled(limits[static_cast<size_t>(l)].lower, l);

    DegreeIndex cur_index;
    std::vector<Integer> cur_num;
    if (l > 0) {
      cur_index = DegreeIndex(r, dl);
      cur_num.assign(cur_index.size(), Integer(0));
    }

    std::vector<Integer> th_u = prev_num, th_l = prev_num;
    std::vector<Integer> nx_u(prev_num.size()), nx_l(prev_num.size());
    const int rp = r - 1;
    for (int j = 1; j <= dl + 1; ++j) {
      const int lim_deg = dl + 1 - j;
      for (size_t idx = 0; idx < prev_index.size(); ++idx) {
        if (prev_index.degree(idx) > lim_deg) continue;
        mpz_mul_si(nx_u[idx].get_mpz_t(), th_u[idx].get_mpz_t(), up.c0);
        mpz_mul_si(nx_l[idx].get_mpz_t(), th_l[idx].get_mpz_t(), lo.c0);
        for (int t = 0; t < rp; ++t) {
          long cu = up.c[static_cast<size_t>(t)], cl = lo.c[static_cast<size_t>(t)];
          if (cu == 0 && cl == 0) continue;
          size_t nb = prev_index.successor(idx, t);
          addmul_small(nx_u[idx], th_u[nb], cu);
          addmul_small(nx_l[idx], th_l[nb], cl);
        }
      }
      std::swap(th_u, nx_u);
      std::swap(th_l, nx_l);
      // th_*[m] now holds the moment functional of (bound)^j * m.
      const int a = j - 1;
      const Integer factor = lcm / j;
      for (size_t idx = 0; idx < prev_index.size(); ++idx) {
        if (prev_index.degree(idx) > dl - a) continue;
        const int* m = prev_index.exponent(idx);
        local[0] = a;
        for (int t = 0; t < rp; ++t) local[static_cast<size_t>(t + 1)] = m[t];
        if (l > 0) {
          Integer& dst = cur_num[cur_index.index(local.data())];
          mpz_sub(dst.get_mpz_t(), th_u[idx].get_mpz_t(), th_l[idx].get_mpz_t());
          dst *= factor;
        } else {
          for (int t = 0; t < k; ++t) orig[static_cast<size_t>(order[static_cast<size_t>(t)])] = local[static_cast<size_t>(t)];
          if (keep && !keep(orig.data())) continue;
          size_t oi = out.index_.index(orig.data());
          Integer& dst = out.num_[oi];
          mpz_sub(dst.get_mpz_t(), th_u[idx].get_mpz_t(), th_l[idx].get_mpz_t());
          dst *= factor;
          out.kept_[oi] = 1;
        }
      }
    }
    out.den_ *= lcm;
    if (l > 0) {
      prev_index = std::move(cur_index);
      prev_num = std::move(cur_num);
    }
  }
  out.scale_pow_.assign(static_cast<size_t>(max_degree + nvars + 1), Integer(1));
  for (size_t i = 1; i < out.scale_pow_.size(); ++i) out.scale_pow_[i] = out.scale_pow_[i - 1] * scale;
  return out;
}

bool MomentTable::has(const int* e) const {
  int d = 0;
  for (int i = 0; i < nvars_; ++i) {
    if (e[i] < 0) return false;
    d += e[i];
  }
  if (d > max_degree_) return false;
  return kept_[index_.index(e)] != 0;
}

Rational MomentTable::moment(const int* e) const {
  if (!has(e)) throw std::out_of_range("moment not materialized in this table");
  int d = 0;
  for (int i = 0; i < nvars_; ++i) d += e[i];
  Rational q(num_[index_.index(e)], den_ * scale_pow_[static_cast<size_t>(d + nvars_)]);
  q.canonicalize();
  return q;
}

Integer MomentTable::common_denominator(int top) const {
  return den_ * scale_pow_.at(static_cast<size_t>(top + nvars_));
}

void MomentTable::scaled_numerator(const int* e, int top, Integer& out) const {
  if (!has(e)) throw std::out_of_range("moment not materialized in this table");
  int d = 0;
  for (int i = 0; i < nvars_; ++i) d += e[i];
  if (d > top) throw std::out_of_range("exponent above the requested top degree");
  mpz_mul(out.get_mpz_t(), num_[index_.index(e)].get_mpz_t(), scale_pow_[static_cast<size_t>(top - d)].get_mpz_t());
}

Rational MomentTable::integrate(const MultiPoly& p) const {
  if (p.nvars() != nvars_) throw std::invalid_argument("variable count mismatch");
  Rational total = 0;
  for (const auto& [e, c] : p.terms()) total += c * moment(e.data());
  return total;
}

MomentTable& MomentTable::operator+=(const MomentTable& o) {
  add_scaled(o, 1);
  return *this;
}

void MomentTable::add_scaled(const MomentTable& o, long factor) {
  if (num_.empty()) {
    *this = o;
    for (auto& v : num_) v *= factor;
    return;
  }
  if (o.nvars_ != nvars_ || o.max_degree_ != max_degree_ || o.scale_ != scale_ || o.den_ != den_) {
    throw std::invalid_argument("incompatible moment tables");
  }
  for (size_t i = 0; i < num_.size(); ++i) {
    if (!o.kept_[i]) continue;
    addmul_small(num_[i], o.num_[i], factor);
    kept_[i] = kept_[i] | o.kept_[i];
  }
}

}  // namespace corrbound
