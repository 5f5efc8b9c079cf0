#include "corrbound/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace corrbound {

namespace {

// Matrix of the map x -> first n-1 coordinates of (x, -sum x) permuted by
// sigma, i.e. row i picks coordinate sigma(i) of the embedding.
IntMatrix permutation_map(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  IntMatrix a(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    int s = sigma[static_cast<size_t>(i)];
    if (s < n - 1) {
      a(i, s) = 1;
    } else {
      for (int j = 0; j < n - 1; ++j) a(i, j) = -1;
    }
  }
  return a;
}

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    size_t len = 0;
    for (size_t j = i; !seen[j]; j = static_cast<size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// Rows of F = [I; -1...-1] are the coordinate functionals of the embedding.
// For M in Sym(H), F M = eps P F; recover eps and the permutation P.
void permutation_labels(const IntMatrix& m, int n, int& eps, int& sign) {
  const int k = n - 1;
  if (n == 2) {
    // -1 is both eps = -1 and the transposition; label it by eps alone.
    eps = static_cast<int>(m(0, 0));
    sign = 1;
    return;
  }
  std::vector<std::vector<long>> f(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(k), 0));
  for (int i = 0; i < k; ++i) f[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int j = 0; j < k; ++j) f[static_cast<size_t>(k)][static_cast<size_t>(j)] = -1;
  std::vector<int> perm(static_cast<size_t>(n), -1);
  eps = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<long> row(static_cast<size_t>(k), 0);
    for (int j = 0; j < k; ++j)
      for (int t = 0; t < k; ++t) row[static_cast<size_t>(j)] += f[static_cast<size_t>(i)][static_cast<size_t>(t)] * m(t, j);
    for (int c = 0; c < n; ++c) {
      for (int s : {1, -1}) {
        bool eq = true;
        for (int j = 0; j < k; ++j) eq = eq && row[static_cast<size_t>(j)] == s * f[static_cast<size_t>(c)][static_cast<size_t>(j)];
        if (eq) {
          if (eps != 0 && eps != s) throw GroupClosureError("element is not a signed permutation map");
          eps = s;
          perm[static_cast<size_t>(i)] = c;
        }
      }
    }
    if (perm[static_cast<size_t>(i)] < 0) throw GroupClosureError("element is not a signed permutation map");
  }
  sign = permutation_sign(perm);
}

}  // namespace

std::vector<std::vector<long>> polytope_vertices_doubled(int n) {
  std::vector<std::vector<long>> v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<long> e(static_cast<size_t>(n), 0);
      e[static_cast<size_t>(i)] = 1;
      e[static_cast<size_t>(j)] = -1;
      e.pop_back();
      v.push_back(e);
    }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

size_t Group::index_of(const IntMatrix& g) const {
  auto it = lookup_.find(g);
  if (it == lookup_.end()) throw std::out_of_range("matrix is not a group element");
  return it->second;
}

size_t Group::product(size_t i, size_t j) const { return index_of(elements_[i] * elements_[j]); }

void Group::finalize() {
  std::sort(elements_.begin(), elements_.end());
  lookup_.clear();
  for (size_t i = 0; i < elements_.size(); ++i) lookup_[elements_[i]] = i;
  const IntMatrix id = IntMatrix::identity(dim());
  inverse_.assign(elements_.size(), 0);
  for (size_t i = 0; i < elements_.size(); ++i)
    for (size_t j = 0; j < elements_.size(); ++j)
      if (elements_[i] * elements_[j] == id) inverse_[i] = j;
  eps_.assign(elements_.size(), 1);
  perm_sign_.assign(elements_.size(), 1);
}

Group Group::transposed() const {
  Group t;
  t.n_ = n_;
  for (const auto& g : elements_) t.elements_.push_back(g.transposed());
  t.finalize();
  for (size_t i = 0; i < elements_.size(); ++i) {
    size_t ti = t.index_of(elements_[i].transposed());
    t.eps_[ti] = eps_[i];
    t.perm_sign_[ti] = perm_sign_[i];
  }
  return t;
}

Group build_gamma(int n, size_t cap) {
  if (n < 2 || n > 4) throw std::invalid_argument("Gamma_n is supported for 2 <= n <= 4");
  const int k = n - 1;
  // Generators of Sym(H): a transposition, the n-cycle and -I.
  std::vector<IntMatrix> gens;
  std::vector<int> swap(static_cast<size_t>(n)), cycle(static_cast<size_t>(n));
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[static_cast<size_t>(n - 1)]);
  for (int i = 0; i < n; ++i) cycle[static_cast<size_t>(i)] = (i + 1) % n;
  gens.push_back(permutation_map(swap).transposed());
  gens.push_back(permutation_map(cycle).transposed());
  IntMatrix neg(k, k);
  for (int i = 0; i < k; ++i) neg(i, i) = -1;
  gens.push_back(neg);

  std::set<IntMatrix> seen{IntMatrix::identity(k)};
  std::deque<IntMatrix> queue{IntMatrix::identity(k)};
  while (!queue.empty()) {
    IntMatrix g = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      IntMatrix h = g * s;
      if (seen.insert(h).second) {
        if (seen.size() > cap) throw GroupClosureError("group closure exceeded the safety cap");
        queue.push_back(h);
      }
    }
  }
  Group gr;
  gr.n_ = n;
  gr.elements_.assign(seen.begin(), seen.end());
  gr.finalize();

  // Every transpose must permute the vertex set of H_{n-1}.
  const auto verts = polytope_vertices_doubled(n);
  const std::set<std::vector<long>> vset(verts.begin(), verts.end());
  for (size_t i = 0; i < gr.order(); ++i) {
    IntMatrix t = gr.elements_[i].transposed();
    std::set<std::vector<long>> image;
    for (const auto& v : verts) image.insert(t.apply(v));
    if (image != vset) throw GroupClosureError("element does not preserve the vertex set");
    int eps = 0, sign = 0;
    permutation_labels(t, n, eps, sign);
    gr.eps_[i] = eps;
    gr.perm_sign_[i] = sign;
  }
  return gr;
}

std::vector<Representation> standard_representations(const Group& g) {
  std::vector<Representation> reps;
  auto one_dim = [&](const std::string& name, auto value) {
    Representation r;
    r.name = name;
    r.dim = 1;
    for (size_t i = 0; i < g.order(); ++i) r.matrices.push_back({Rational(value(i))});
    reps.push_back(std::move(r));
  };
  one_dim("trivial", [](size_t) { return 1; });
  one_dim("eps", [&](size_t i) { return g.eps(i); });
  one_dim("sign", [&](size_t i) { return g.perm_sign(i); });
  one_dim("eps*sign", [&](size_t i) { return g.eps(i) * g.perm_sign(i); });
  if (g.dim() >= 2) {
    for (int twist : {0, 1}) {
      Representation r;
      r.name = twist ? "eps*natural" : "natural";
      r.dim = g.dim();
      for (size_t i = 0; i < g.order(); ++i) {
        std::vector<Rational> m;
        int s = twist ? g.eps(i) : 1;
        for (long v : g.element(i).a) m.emplace_back(s * v);
        r.matrices.push_back(std::move(m));
      }
      reps.push_back(std::move(r));
    }
  }
  return reps;
}

bool is_homomorphism(const Group& g, const Representation& rep) {
  const int d = rep.dim;
  for (size_t i = 0; i < g.order(); ++i)
    for (size_t j = 0; j < g.order(); ++j) {
      size_t k = g.product(i, j);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          Rational s = 0;
          for (int t = 0; t < d; ++t) s += rep.entry(i, r, t) * rep.entry(j, t, c);
          if (s != rep.entry(k, r, c)) return false;
        }
    }
  return true;
}

MultiPoly PolynomialAction::operator()(const Group& g, size_t i, const MultiPoly& p) const {
  return p.compose_linear(g.element(g.inverse(i)));
}

ShiftFunction ShiftAction::operator()(const Group& g, size_t i, const ShiftFunction& f) const {
  ShiftFunction out;
  for (const auto& [lam, c] : f) out[g.element(i).apply(lam)] += c;
  return out;
}

ProjectionOperator<PolynomialAction> projection_operator(const Group& g, const Representation& rep, int j,
                                                         int jp) {
  return ProjectionOperator<PolynomialAction>(g, rep, j, jp);
}

std::vector<MultiPoly> invariant_poly_basis(int n, int d) {
  if (d < 0) throw std::invalid_argument("degree must be nonnegative");
  const Group sym = build_gamma(n).transposed();
  const int k = n - 1;
  std::vector<MultiPoly> basis;
  // Row-reduced copies of accepted vectors, keyed by pivot exponent.
  std::vector<std::pair<Exponent, MultiPoly>> echelon;
  auto reduce = [&](MultiPoly p) {
    for (const auto& [pivot, row] : echelon) {
      Rational c = p.coefficient(pivot);
      if (c != 0) p -= c * row;
    }
    return p;
  };
  // Graded enumeration of exponents.
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<Exponent> monos;
    Exponent e(static_cast<size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == k - 1) {
        e[static_cast<size_t>(pos)] = left;
        monos.push_back(e);
        return;
      }
      for (int a = left; a >= 0; --a) {
        e[static_cast<size_t>(pos)] = a;
        rec(pos + 1, left - a);
      }
    };
    rec(0, deg);
    for (const auto& mono : monos) {
      MultiPoly s = poly_symmetrize(MultiPoly::monomial(mono), sym.elements());
      if (s.is_zero()) continue;
      MultiPoly r = reduce(s);
      if (r.is_zero()) continue;
      // Normalize the residual on its leading exponent and clear that
      // exponent from existing rows to keep the echelon form reduced.
      const Exponent pivot = r.terms().rbegin()->first;
      r *= 1 / r.coefficient(pivot);
      for (auto& [pv, row] : echelon) {
        Rational c = row.coefficient(pivot);
        if (c != 0) row -= c * r;
      }
      echelon.emplace_back(pivot, r);
      basis.push_back(s);
    }
  }
  return basis;
}

std::vector<ShiftOrbit> invariant_shift_basis(int n, int m, int d) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (d < 0) throw std::invalid_argument("d must be nonnegative");
  const Group gamma = build_gamma(n);
  const int k = n - 1;
  auto key = [](const std::vector<long>& v) {
    long l1 = 0;
    for (long x : v) l1 += std::labs(x);
    return std::make_pair(l1, v);
  };
  std::set<std::vector<long>> assigned;
  std::vector<ShiftOrbit> orbits;
  std::vector<long> mu(static_cast<size_t>(k), 0);
  std::function<void(int, long)> rec = [&](int pos, long left) {
    if (pos == k) {
      if (assigned.count(mu)) return;
      std::set<std::vector<long>> orbit;
      for (const auto& g : gamma.elements()) orbit.insert(g.apply(mu));
      ShiftOrbit o;
      o.members.assign(orbit.begin(), orbit.end());
      o.representative = *std::min_element(o.members.begin(), o.members.end(),
                                           [&](const auto& a, const auto& b) { return key(a) < key(b); });
      assigned.insert(orbit.begin(), orbit.end());
      orbits.push_back(std::move(o));
      return;
    }
    for (long a = -left; a <= left; ++a) {
      mu[static_cast<size_t>(pos)] = a;
      rec(pos + 1, left - std::labs(a));
    }
  };
  rec(0, d);
  std::sort(orbits.begin(), orbits.end(),
            [&](const ShiftOrbit& a, const ShiftOrbit& b) { return key(a.representative) < key(b.representative); });
  return orbits;
}

}  // namespace corrbound
