#include "airyproc/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace airyproc {

void BetaEnsembleSpec::validate() const {
  if (n < 2) throw std::invalid_argument("BetaEnsembleSpec: n must be >= 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("BetaEnsembleSpec: beta must be positive and finite");
  }
}

double edge_scale(std::size_t n) { return std::pow(static_cast<double>(n), 1.0 / 6.0); }

EnsembleDraw sample_hermite_leading(const BetaEnsembleSpec& spec, RngStream& stream,
                                    std::size_t rows) {
  spec.validate();
  if (rows < 2 || rows > spec.n) {
    throw std::invalid_argument("sample_hermite_leading: rows must lie in [2, n]");
  }
  EnsembleDraw draw;
  draw.spec = spec;
  draw.seed = {stream.master_seed(), stream.stream_index()};
  draw.diag_raw.resize(rows);
  draw.offdiag_raw.resize(rows - 1);
  const double inv_sqrt_beta = 1.0 / std::sqrt(spec.beta);
  for (std::size_t i = 0; i < rows; ++i) {
    draw.diag_raw[i] = sample_gaussian(stream, 0.0, 2.0) * inv_sqrt_beta;
    if (i + 1 < spec.n) {
      const double dof = static_cast<double>(spec.n - 1 - i) * spec.beta;
      const double chi = sample_chi(stream, dof) * inv_sqrt_beta;
      if (i + 1 < rows) draw.offdiag_raw[i] = chi;
    }
  }
  return draw;
}

EnsembleDraw sample_hermite(const BetaEnsembleSpec& spec, RngStream& stream) {
  return sample_hermite_leading(spec, stream, spec.n);
}

TridiagSym edge_minor_matrix(const EnsembleDraw& draw, std::size_t removed) {
  const std::size_t rows = draw.rows();
  if (removed + 2 > rows) {
    throw std::invalid_argument("edge_minor_matrix: removed=" + std::to_string(removed) +
                                " leaves fewer than 2 of " + std::to_string(rows) + " rows");
  }
  const double center = 2.0 * std::sqrt(static_cast<double>(draw.spec.n));
  const std::size_t m = rows - removed;
  std::vector<double> d(m);
  std::vector<double> e(m - 1);
  for (std::size_t i = 0; i < m; ++i) d[i] = center - draw.diag_raw[removed + i];
  for (std::size_t i = 0; i + 1 < m; ++i) e[i] = -draw.offdiag_raw[removed + i];
  return TridiagSym(std::move(d), std::move(e));
}

std::vector<double> scaled_edge_eigenvalues(const EnsembleDraw& draw, std::size_t removed,
                                            std::size_t num_eigs, double tol) {
  const auto t = edge_minor_matrix(draw, removed);
  if (num_eigs == 0 || num_eigs > t.size()) {
    throw std::invalid_argument("scaled_edge_eigenvalues: num_eigs must lie in [1, n - removed]");
  }
  auto eigs = lowest_eigenvalues(t, num_eigs, tol);
  const double s = edge_scale(draw.spec.n);
  for (double& x : eigs) x *= s;
  return eigs;
}

std::vector<double> scaled_edge_eigenvalues(const EnsembleDraw& draw, std::size_t removed,
                                            std::size_t num_eigs) {
  return scaled_edge_eigenvalues(draw, removed, num_eigs,
                                 default_tolerance(edge_minor_matrix(draw, removed)));
}

}  // namespace airyproc
