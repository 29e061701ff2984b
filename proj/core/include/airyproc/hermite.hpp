#ifndef AIRYPROC_HERMITE_HPP
#define AIRYPROC_HERMITE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "airyproc/random.hpp"
#include "airyproc/tridiag.hpp"

namespace airyproc {

struct BetaEnsembleSpec {
  std::size_t n = 0;
  double beta = 0.0;

  /// Throws std::invalid_argument unless n >= 2 and 0 < beta < inf.
  void validate() const;
};

struct SeedRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/**
 * One draw of the tridiagonal beta-Hermite matrix A_beta.
 *
 * diag_raw[i] ~ N(0, 2) / sqrt(beta) and offdiag_raw[i] ~ chi_{(n-1-i) beta} / sqrt(beta),
 * all independent. Entries are drawn in row order (diag[0], offdiag[0], diag[1], ...),
 * so a draw restricted to its leading `rows` rows is bit-identical to the
 * corresponding block of the full draw from the same stream.
 */
struct EnsembleDraw {
  BetaEnsembleSpec spec;
  SeedRecord seed;
  std::vector<double> diag_raw;
  std::vector<double> offdiag_raw;

  /// Rows actually sampled; equals spec.n unless the draw is a leading block.
  std::size_t rows() const { return diag_raw.size(); }
  bool is_leading_block() const { return rows() < spec.n; }
};

EnsembleDraw sample_hermite(const BetaEnsembleSpec& spec, RngStream& stream);
/// Leading rows x rows block of a full draw (same values, same stream use).
EnsembleDraw sample_hermite_leading(const BetaEnsembleSpec& spec, RngStream& stream,
                                    std::size_t rows);

/**
 * 2 sqrt(n) I - A_beta with the first `removed` rows and columns deleted.
 *
 * `removed` counts deleted rows directly: removed = 0 is the full matrix, and the
 * minor written H^{(k)} with k - 1 deleted rows corresponds to removed = k - 1.
 * The result is not scaled by n^{1/6}.
 */
TridiagSym edge_minor_matrix(const EnsembleDraw& draw, std::size_t removed);

/// n^{1/6} times the num_eigs lowest eigenvalues of edge_minor_matrix(draw, removed).
std::vector<double> scaled_edge_eigenvalues(const EnsembleDraw& draw, std::size_t removed,
                                            std::size_t num_eigs);
std::vector<double> scaled_edge_eigenvalues(const EnsembleDraw& draw, std::size_t removed,
                                            std::size_t num_eigs, double tol);

/// n^{1/6}
double edge_scale(std::size_t n);

}  // namespace airyproc

#endif  // AIRYPROC_HERMITE_HPP
