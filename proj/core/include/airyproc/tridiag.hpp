#ifndef AIRYPROC_TRIDIAG_HPP
#define AIRYPROC_TRIDIAG_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace airyproc {

/// Thrown when bisection or inverse iteration cannot make progress.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Real symmetric tridiagonal matrix, stored as its diagonal (length m) and
 * off-diagonal (length m - 1). Immutable after construction.
 */
class TridiagSym {
 public:
  TridiagSym(std::vector<double> diag, std::vector<double> offdiag);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& offdiag() const { return offdiag_; }

  double gershgorin_lower() const { return glo_; }
  double gershgorin_upper() const { return ghi_; }
  /// max(|lower|, |upper|); the matrix scale used for default tolerances.
  double scale() const;

  /// Principal submatrix on rows/columns [first, last).
  TridiagSym principal(std::size_t first, std::size_t last) const;
  /// y = T x
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  std::vector<double> offdiag_sq_;
  double pivmin_ = 0.0;
  double glo_ = 0.0;
  double ghi_ = 0.0;

  friend std::size_t sturm_count(const TridiagSym& t, double x);
};

struct SpectralPair {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;  // unit l2 norm, first nonzero entry > 0
  double first_entry = 0.0;
  double residual = 0.0;            // ||T v - lambda v||_2
  bool near_degenerate = false;     // neighbouring eigenvalue closer than tol
};

/// Result of bracketing the k lowest eigenvalues.
struct EigenBrackets {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> values;             // bracket midpoints, nondecreasing
  std::vector<bool> near_degenerate;      // gap to a neighbour below tol
};

/// 1e-10 times the Gershgorin scale of T.
double default_tolerance(const TridiagSym& t);

/// Number of eigenvalues of T strictly less than x.
std::size_t sturm_count(const TridiagSym& t, double x);

EigenBrackets bracket_lowest(const TridiagSym& t, std::size_t k, double tol);
std::vector<double> lowest_eigenvalues(const TridiagSym& t, std::size_t k, double tol);
std::vector<double> lowest_eigenvalues(const TridiagSym& t, std::size_t k);

/**
 * Inverse iteration at shift `lambda`. `deflate` lists unit vectors the result
 * is kept orthogonal to (used for eigenvalues closer than the cluster gap).
 * The returned eigenvalue is the Rayleigh quotient of the converged vector
 * when that lies within tol of `lambda`, otherwise `lambda` itself.
 */
SpectralPair eigenvector_for(const TridiagSym& t, double lambda, double tol,
                             std::span<const std::vector<double>> deflate = {});

/// k lowest eigenpairs with clustered eigenvalues reorthogonalized.
std::vector<SpectralPair> lowest_pairs(const TridiagSym& t, std::size_t k, double tol);
std::vector<SpectralPair> lowest_pairs(const TridiagSym& t, std::size_t k);

double rayleigh_quotient(const TridiagSym& t, std::span<const double> v);

}  // namespace airyproc

#endif  // AIRYPROC_TRIDIAG_HPP
