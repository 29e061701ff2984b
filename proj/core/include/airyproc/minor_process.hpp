#ifndef AIRYPROC_MINOR_PROCESS_HPP
#define AIRYPROC_MINOR_PROCESS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "airyproc/hermite.hpp"
#include "airyproc/random.hpp"
#include "airyproc/stats.hpp"

namespace airyproc {

/// Raised when eigenvalues of nested minors fail to interlace.
class InterlacingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TrajectoryFrame {
  double t = 0.0;
  std::size_t removed = 0;               // floor(t n^{1/3}) leading rows deleted
  std::vector<double> scaled_eigs;       // n^{1/6} lambda_i, increasing
  std::vector<double> recentered;        // scaled_eigs - t
  std::vector<double> spectral_weights;  // q_i = (v_1^{(i)})^2 of the current minor
  std::vector<double> derivative_est;    // n q_i
};

struct Trajectory {
  BetaEnsembleSpec spec;
  SeedRecord seed;
  std::size_t num_eigs = 0;
  double dt = 0.0;
  std::size_t rows_used = 0;  // leading rows of the draw that entered the solves
  std::vector<TrajectoryFrame> frames;
};

/**
 * Options shared by the Monte Carlo drivers.
 *
 * window > 0 restricts every solve to the leading block that extends `window`
 * rescaled units (window * n^{1/3} rows) past the deepest minor. The edge
 * eigenvectors decay like exp(-(2/3) x^{3/2}), so for window >= 20 the
 * truncation error is far below double precision while the cost drops from
 * O(n) to O(n^{1/3}) per solve. window = 0 always uses the whole matrix.
 */
struct MinorOptions {
  double window = 0.0;
  double tol = 0.0;      // 0: default_tolerance of each minor
  unsigned threads = 1;  // replica-level workers (0 = hardware concurrency)
};

/// floor(t n^{1/3}), robust to rounding of grid values like 3 * 0.1.
std::size_t minor_index(double t, std::size_t n);

/// Leading rows needed to host minors up to `max_removed` under opts.window.
std::size_t rows_for(const BetaEnsembleSpec& spec, std::size_t max_removed, std::size_t num_eigs,
                     const MinorOptions& opts);

Trajectory compute_trajectory(const BetaEnsembleSpec& spec, RngStream& stream,
                              std::size_t num_eigs, double t_max, double dt,
                              const MinorOptions& opts = {});

/// Replica r is computed from RngStream(master_seed, r).
std::vector<Trajectory> trajectory_replicas(const BetaEnsembleSpec& spec, std::uint64_t master_seed,
                                            std::size_t reps, std::size_t num_eigs, double t_max,
                                            double dt, const MinorOptions& opts = {});

/// reps x num_eigs matrix of n q_i for the full (removed = 0) matrix.
std::vector<std::vector<double>> spectral_weight_samples(const BetaEnsembleSpec& spec,
                                                         std::uint64_t master_seed,
                                                         std::size_t num_eigs, std::size_t reps,
                                                         const MinorOptions& opts = {});

struct FiniteDifferences {
  std::vector<double> t;          // left frame of each pair
  std::vector<double> quotient;   // (Lambda_i(t_b) - Lambda_i(t_a)) / ((k_b - k_a) n^{-1/3})
};

FiniteDifferences derivative_by_finite_difference(const Trajectory& traj, std::size_t i);

struct LinearityProfile {
  std::size_t n = 0;
  std::vector<double> x;          // j n^{-1/3}, j = 0 .. floor(x0 n^{1/3})
  std::vector<double> deviation;  // |v_j - j v_1|, v indexed from 1, v_0 = 0
  double first_entry = 0.0;

  /// max over x > 0 of n^{1/6} deviation / x^2.
  double scaled_bound() const;
};

LinearityProfile eigvec_linearity_profile(const BetaEnsembleSpec& spec, RngStream& stream,
                                          std::size_t i, double x0, const MinorOptions& opts = {});

struct AsymmetryReport {
  double skewness = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double confidence = 0.0;
  std::size_t n_samples = 0;
  bool positive = false;  // ci_lower > 0
};

/// Sample skewness of (quotient - 1) with a percentile-bootstrap interval.
AsymmetryReport reversibility_asymmetry(std::span<const double> quotients, RngStream& stream,
                                        std::size_t resamples = 2000, double confidence = 0.99);

}  // namespace airyproc

#endif  // AIRYPROC_MINOR_PROCESS_HPP
