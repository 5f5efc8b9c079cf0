#pragma once

// The single-constraint program reduces to A c = b: any c with c^T b != 0
// gives the feasible g = (sum c_i g_i)^2 / (c^T b)^2 and the upper bound
// c^T A c / (c^T b)^2, which the solution of A c = b minimizes.
//
// Rigor lives in certify_bound, which evaluates that quotient for whatever c
// it is handed. The solver only has to produce a good c.

#include <stdexcept>
#include <string>
#include <vector>

#include "corrbound/arith/scalar.hpp"
#include "corrbound/correlation_functionals.hpp"

namespace corrbound {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankOneSolution {
  std::vector<Scalar> c;        // 0 at dropped indices
  std::vector<size_t> dropped;  // basis elements removed as dependent
  std::vector<Scalar> pivots;   // in elimination order, kept elements only
};

// Symmetric elimination with diagonal pivoting (largest pivot first). A pivot
// that is zero (exact path) or whose enclosure contains zero is treated as a
// dependent basis element and dropped. A negative pivot means A is not
// positive semidefinite within its enclosures.
RankOneSolution solve_rank1(const std::vector<std::vector<Scalar>>& A, const std::vector<Scalar>& b,
                            mpfr_prec_t prec = kDefaultPrecision);
RankOneSolution solve_rank1(const GramSystem& sys);

// Interval-valued c are replaced by their midpoints, so the certified value
// is the quotient at a concrete rational vector.
std::vector<Scalar> rational_coefficients(const std::vector<Scalar>& c);

struct BoundCertificate {
  GramMeta meta;
  std::vector<std::string> basis_labels;
  std::vector<Scalar> c;
  std::vector<size_t> dropped;
  Scalar bound;     // c^T A c / (c^T b)^2
  Scalar fraction;  // 1 - bound / (n-1)!
};

// Valid for any c. Exact when A, b and c are exact.
BoundCertificate certify_bound(const GramSystem& sys, const std::vector<Scalar>& c);
Scalar quadratic_bound(const std::vector<std::vector<Scalar>>& A, const std::vector<Scalar>& b,
                       const std::vector<Scalar>& c, mpfr_prec_t prec = kDefaultPrecision);

// 1 - bound / (n-1)!, outward rounded.
Scalar fraction_bound(int n, const Scalar& bound, mpfr_prec_t prec = kDefaultPrecision);

// Solve, then certify at rational coefficients.
BoundCertificate optimal_bound(const GramSystem& sys);

// Decimal with `decimals` digits after the point, rounded toward +inf
// (upper end of the enclosure) or -inf (lower end).
std::string decimal_up(const Scalar& x, int decimals);
std::string decimal_down(const Scalar& x, int decimals);

// JSON text of the certificate with provenance.
std::string certificate_json(const BoundCertificate& cert);

}  // namespace corrbound
