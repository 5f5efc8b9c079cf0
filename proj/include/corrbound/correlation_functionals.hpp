#pragma once

// Gram data for the bound: b_i = g_i(0) and A_ii' = nu_n(g_i g_i'), where
// nu_n(g) = int g(x) W_n(x, 0) dx.
//
// Two parametrizations:
//  * polynomial (n = 3, m = 1): hat g_i = p_i 1_H with Sym(H)-invariant p_i.
//    Everything is an exact rational computed from monomial moments.
//  * shifts: hat g_mu is 1_{H/m} translated by mu, summed over a Gamma orbit.
//    nu_n is a lattice sum (Poisson summation) truncated to a box of
//    max-norm C, plus an extrapolated tail whose uncertainty is folded into
//    the enclosure radius.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrbound/arith/interval.hpp"
#include "corrbound/arith/multipoly.hpp"
#include "corrbound/arith/rational.hpp"
#include "corrbound/arith/scalar.hpp"
#include "corrbound/symmetry.hpp"

namespace corrbound {

// det[sinc(x_i - x_j)]; callers append the trailing 0 of W_n(x, 0).
Interval w_eval(int n, const std::vector<Scalar>& x, mpfr_prec_t prec = kDefaultPrecision);

// ---------------------------------------------------------------- polynomial

// int_H p for each p (n = 3).
std::vector<Rational> b_poly(const std::vector<MultiPoly>& basis);
// nu_3 of the product of the functions with hat g = p 1_H and p' 1_H.
Rational nu3_poly(const MultiPoly& p, const MultiPoly& q);

struct ExactGram {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
};
// All entries at once from shared moment tables; equal to nu3_poly and
// b_poly entrywise.
ExactGram poly_gram(const std::vector<MultiPoly>& basis);

// --------------------------------------------------------------------- shift

class TailToleranceError : public std::runtime_error {
 public:
  TailToleranceError(const std::string& msg, double achieved) : std::runtime_error(msg), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class InvalidShiftError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sampling y = I/(m+1) + s with s_i = k_i / (m (m+1) n), I in Z^{n-1},
// max|I_i| <= C.
struct TruncationParams {
  long C = 0;
  std::vector<long> shift;      // k_i
  double tail_tolerance = 1e-3;  // relative, on the tail uncertainty
  int probe_rings = 0;           // consecutive rings sampled at 2C, 4C, 8C (0: one period)

  // Default shift k_i = i + 1. Validates that no sampled point is singular:
  // k_i != 0 and k_i != k_j modulo m n.
  static TruncationParams make(int n, int m, long C, std::vector<long> shift = {}, double tail_tolerance = 1e-3);
  void validate(int n, int m) const;
  std::vector<Rational> shift_vector(int n, int m) const;
};

// Orbit sums of ft_H(1/m, -m mu), exact limits at the (singular) points.
std::vector<Interval> b_shift(int n, int m, const std::vector<ShiftOrbit>& basis,
                              mpfr_prec_t prec = kDefaultPrecision);

// Value of one orbit-sum basis function's transform at a point (tests).
Interval shift_basis_value(int n, const ShiftOrbit& orbit, const std::vector<Rational>& y, mpfr_prec_t prec);

struct TailReport {
  double truncated_mid = 0;  // midpoint of the box sum
  double tail = 0;           // extrapolated tail added to the midpoint
  double tail_uncertainty = 0;
};

struct ShiftGram {
  std::vector<std::vector<Interval>> A;
  std::vector<Interval> b;
  std::vector<std::vector<TailReport>> tails;
};

// Every A entry from one pass over the lattice. workers <= 0 means the
// hardware concurrency. The reduction order is fixed (ring by ring), so the
// result does not depend on the worker count.
ShiftGram shift_gram(int n, int m, const std::vector<ShiftOrbit>& basis, const TruncationParams& t,
                     mpfr_prec_t prec = kDefaultPrecision, int workers = 0);
// One entry.
Interval nu_shift(int n, int m, const ShiftOrbit& a, const ShiftOrbit& b, const TruncationParams& t,
                  mpfr_prec_t prec = kDefaultPrecision, int workers = 0);

// Raw ring sums of sum_{max|I| = c} f(y_I) for c = 0..C (single pair, tests
// and diagnostics), normalized like nu_shift.
std::vector<Interval> shift_ring_sums(int n, int m, const ShiftOrbit& a, const ShiftOrbit& b,
                                      const TruncationParams& t, long c_max, mpfr_prec_t prec);

// ------------------------------------------------------------------ assembly

enum class Parametrization { poly, shift };

class CacheCorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GramMeta {
  int n = 3, m = 1;
  Parametrization param = Parametrization::poly;
  int d = 0;
  std::optional<TruncationParams> trunc;  // shift only
  mpfr_prec_t prec = kDefaultPrecision;
  std::string key() const;
  // Inverse of key(); throws CacheCorruptionError on a malformed key.
  static GramMeta from_key(const std::string& key);
};

struct GramSystem {
  GramMeta meta;
  std::vector<std::vector<Scalar>> A;
  std::vector<Scalar> b;
  std::vector<std::string> basis_labels;
  bool exact() const { return meta.param == Parametrization::poly; }
};

// Newline-delimited JSON records {meta, entry, i, i', mid, rad, prec[, exact]},
// one file per meta key in the cache directory.
class GramCache {
 public:
  explicit GramCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const GramMeta& meta) const;
  std::optional<GramSystem> load(const GramMeta& meta) const;
  void store(const GramSystem& sys) const;
  struct Listing {
    std::filesystem::path file;
    std::string meta;
    size_t records = 0;
  };
  std::vector<Listing> list() const;
  size_t clear() const;
  // Parses one file; throws CacheCorruptionError on malformed records.
  static std::vector<std::string> read_records(const std::filesystem::path& file);

 private:
  std::filesystem::path dir_;
};

// Basis for the meta (invariant polynomials or shift orbits).
std::vector<MultiPoly> poly_basis_for(const GramMeta& meta);
std::vector<ShiftOrbit> shift_basis_for(const GramMeta& meta);

// Builds the system, reusing and filling the cache when one is given.
GramSystem assemble_gram(const GramMeta& meta, const GramCache* cache = nullptr, int workers = 0);

// Recomputes entry (i, j) (j < 0 for b_i) from scratch.
Scalar recompute_entry(const GramMeta& meta, int i, int j, int workers = 0);

}  // namespace corrbound
