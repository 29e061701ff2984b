#ifndef AIRYPROC_SAO_HPP
#define AIRYPROC_SAO_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "airyproc/brownian.hpp"
#include "airyproc/stats.hpp"
#include "airyproc/tridiag.hpp"

namespace airyproc {

/// -d^2/dx^2 + x + (2/sqrt(beta)) b'(x); beta = +inf switches the noise off.
struct SaoModel {
  double beta = 2.0;

  double noise_coefficient() const;
  void validate() const;
};

enum class SlopeRule {
  OneSided,    // phi(t + h) / h
  ThreePoint,  // (4 phi(t + h) - phi(t + 2h)) / (2h)
};

struct SaoOptions {
  double tol = 1e-9;  // absolute bisection tolerance on Lambda
  SlopeRule slope = SlopeRule::OneSided;
};

struct SaoDomainSolve {
  std::size_t t_index = 0;
  double t = 0.0;
  double L = 0.0;
  double mesh = 0.0;
  std::vector<double> eigs;             // k lowest Lambda_j(t)
  std::vector<double> boundary_slopes;  // f'_{j,t}(t) > 0
  /// Interior values at t + i h, i = 1 .. M - 1, with h * sum(phi^2) = 1.
  std::vector<std::vector<double>> eigenfunctions;
};

/// Number of cells M between t = origin + t_index h and L.
std::size_t sao_cells(const BrownianGrid& path, std::size_t t_index, double L);

/**
 * Finite-difference matrix on the interior nodes x_i = t + i h, i = 1 .. M - 1,
 * Dirichlet at t and L. Diagonal 2/h^2 + x_i + c (b(x_i) - b(x_i - h)) / h with
 * c = 2/sqrt(beta); off-diagonal -1/h^2. Shifting t_index reuses the same
 * increments, so all domains are coupled through one path.
 */
TridiagSym assemble_sao_matrix(const SaoModel& model, const BrownianGrid& path,
                               std::size_t t_index, double L);

SaoDomainSolve solve_domain(const SaoModel& model, const BrownianGrid& path, std::size_t t_index,
                            double L, std::size_t k, const SaoOptions& opts = {});

struct DerivativeCheck {
  std::size_t j = 0;
  double t = 0.0;
  double lambda = 0.0;
  double slope = 0.0;
  double slope_squared = 0.0;
  double fd_quotient = 0.0;  // (Lambda_j(t + delta) - Lambda_j(t)) / delta
  double rel_err = 0.0;      // |fd - slope^2| / slope^2
};

/// delta = window_cells * h; both sides read the same path.
std::vector<DerivativeCheck> derivative_check(const SaoModel& model, const BrownianGrid& path,
                                              std::size_t t_index, std::size_t k,
                                              std::size_t window_cells, double L,
                                              const SaoOptions& opts = {});

struct SplicedBound {
  double rq_value = 0.0;  // Rayleigh quotient of psi under the t-domain matrix
  double lambda_t = 0.0;
  double lambda_s = 0.0;
  double slope_s = 0.0;
  double epsilon = 0.0;     // (a - t) / (t - s); 0 when s == t
  double first_order = 0.0; // slope_s^2 (t - s) (1 + eps) / eps
};

/**
 * psi equals the linear ramp (x - t) f_{j,s}(a) / (a - t) on [t, a) and f_{j,s}
 * on [a, L], evaluated on the t-domain nodes. j is 0-based. Requires
 * s_index <= t_index <= splice_index < last interior node.
 */
SplicedBound spliced_rayleigh_bound(const SaoModel& model, const BrownianGrid& path,
                                    std::size_t s_index, std::size_t t_index,
                                    std::size_t splice_index, std::size_t j, double L,
                                    const SaoOptions& opts = {});

struct StationaritySamples {
  std::vector<double> at_origin;  // Lambda_1 on [origin, origin + length]
  std::vector<double> shifted;    // Lambda_1 on [t*, t* + length] minus t*
  double t_star = 0.0;
};

StationaritySamples stationarity_samples(const SaoModel& model, std::span<const BrownianGrid> paths,
                                         std::size_t t_star_index, double length,
                                         const SaoOptions& opts = {}, unsigned threads = 1);

/**
 * Two-sample KS between Lambda_1 on [origin, origin + length] and
 * Lambda_1 - t* on [t*, t* + length], one independent path per sample.
 */
TestReport stationarity_shift_check(const SaoModel& model, std::span<const BrownianGrid> paths,
                                    std::size_t t_star_index, double length,
                                    const SaoOptions& opts = {}, double level = 0.01,
                                    unsigned threads = 1);

}  // namespace airyproc

#endif  // AIRYPROC_SAO_HPP
