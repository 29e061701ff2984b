#include "airyproc/sao.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "airyproc/format.hpp"
#include "airyproc/parallel.hpp"

namespace airyproc {

double SaoModel::noise_coefficient() const {
  if (std::isinf(beta)) return 0.0;
  return 2.0 / std::sqrt(beta);
}

void SaoModel::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("SaoModel: beta must be positive (or inf)");
}

std::size_t sao_cells(const BrownianGrid& path, std::size_t t_index, double L) {
  if (!(path.mesh > 0.0)) throw std::invalid_argument("sao_cells: path has no mesh");
  const double total = std::round((L - path.origin) / path.mesh);
  if (!(total > 0.0) || total > static_cast<double>(path.num_cells())) {
    throw std::invalid_argument("sao_cells: right end L=" + format_double(L) +
                                " lies outside the path extent");
  }
  const auto end = static_cast<std::size_t>(total);
  if (t_index + 3 > end) {
    throw std::invalid_argument("sao_cells: need at least 3 cells between t and L");
  }
  return end - t_index;
}

TridiagSym assemble_sao_matrix(const SaoModel& model, const BrownianGrid& path,
                               std::size_t t_index, double L) {
  model.validate();
  const std::size_t cells = sao_cells(path, t_index, L);
  const double h = path.mesh;
  const double inv_h2 = 1.0 / (h * h);
  const double c = model.noise_coefficient();
  const double t = path.origin + static_cast<double>(t_index) * h;
  const std::size_t m = cells - 1;
  std::vector<double> d(m);
  std::vector<double> e(m - 1, -inv_h2);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t node = i + 1;
    const double x = t + static_cast<double>(node) * h;
    double v = 2.0 * inv_h2 + x;
    if (c != 0.0) v += c * path.increments[t_index + node - 1] / h;
    d[i] = v;
  }
  return TridiagSym(std::move(d), std::move(e));
}

SaoDomainSolve solve_domain(const SaoModel& model, const BrownianGrid& path, std::size_t t_index,
                            double L, std::size_t k, const SaoOptions& opts) {
  const auto mat = assemble_sao_matrix(model, path, t_index, L);
  if (k == 0 || k > mat.size()) throw std::invalid_argument("solve_domain: bad eigenvalue count");
  const double h = path.mesh;
  SaoDomainSolve out;
  out.t_index = t_index;
  out.t = path.origin + static_cast<double>(t_index) * h;
  out.L = L;
  out.mesh = h;
  const auto pairs = lowest_pairs(mat, k, opts.tol);
  const double norm = 1.0 / std::sqrt(h);
  for (const auto& p : pairs) {
    std::vector<double> phi(p.eigenvector.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = p.eigenvector[i] * norm;
    double slope = phi[0] / h;
    if (opts.slope == SlopeRule::ThreePoint && phi.size() >= 2) {
      slope = (4.0 * phi[0] - phi[1]) / (2.0 * h);
    }
    out.eigs.push_back(p.eigenvalue);
    out.boundary_slopes.push_back(std::abs(slope));
    out.eigenfunctions.push_back(std::move(phi));
  }
  return out;
}

std::vector<DerivativeCheck> derivative_check(const SaoModel& model, const BrownianGrid& path,
                                              std::size_t t_index, std::size_t k,
                                              std::size_t window_cells, double L,
                                              const SaoOptions& opts) {
  if (window_cells == 0) throw std::invalid_argument("derivative_check: window must be >= 1 cell");
  const auto here = solve_domain(model, path, t_index, L, k, opts);
  const auto ahead = solve_domain(model, path, t_index + window_cells, L, k, opts);
  const double delta = static_cast<double>(window_cells) * path.mesh;
  std::vector<DerivativeCheck> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto& r = out[j];
    r.j = j;
    r.t = here.t;
    r.lambda = here.eigs[j];
    r.slope = here.boundary_slopes[j];
    r.slope_squared = r.slope * r.slope;
    r.fd_quotient = (ahead.eigs[j] - here.eigs[j]) / delta;
    r.rel_err = std::abs(r.fd_quotient - r.slope_squared) / r.slope_squared;
  }
  return out;
}

SplicedBound spliced_rayleigh_bound(const SaoModel& model, const BrownianGrid& path,
                                    std::size_t s_index, std::size_t t_index,
                                    std::size_t splice_index, std::size_t j, double L,
                                    const SaoOptions& opts) {
  if (s_index > t_index || t_index > splice_index) {
    throw std::invalid_argument("spliced_rayleigh_bound: need s <= t <= a");
  }
  const std::size_t cells_s = sao_cells(path, s_index, L);
  const std::size_t end = s_index + cells_s;  // global index of the right wall
  if (splice_index + 1 >= end) {
    throw std::invalid_argument("spliced_rayleigh_bound: splice point outside the domain");
  }
  const auto on_s = solve_domain(model, path, s_index, L, j + 1, opts);
  const auto mat_t = assemble_sao_matrix(model, path, t_index, L);
  const double lambda_t = lowest_eigenvalues(mat_t, j + 1, opts.tol)[j];

  const auto& f = on_s.eigenfunctions[j];
  // f[g - s_index - 1] is the s-domain eigenfunction at global node g.
  const auto f_at = [&](std::size_t g) { return g == s_index ? 0.0 : f[g - s_index - 1]; };
  std::vector<double> psi(mat_t.size());
  const double f_a = f_at(splice_index);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const std::size_t g = t_index + i + 1;
    if (g < splice_index) {
      psi[i] = f_a * static_cast<double>(g - t_index) / static_cast<double>(splice_index - t_index);
    } else {
      psi[i] = f_at(g);
    }
  }

  SplicedBound out;
  out.rq_value = rayleigh_quotient(mat_t, psi);
  out.lambda_t = lambda_t;
  out.lambda_s = on_s.eigs[j];
  out.slope_s = on_s.boundary_slopes[j];
  if (t_index > s_index) {
    const double gap = static_cast<double>(t_index - s_index) * path.mesh;
    out.epsilon = static_cast<double>(splice_index - t_index) / static_cast<double>(t_index - s_index);
    if (out.epsilon > 0.0) {
      out.first_order = out.slope_s * out.slope_s * gap * (1.0 + out.epsilon) / out.epsilon;
    } else {
      out.first_order = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

StationaritySamples stationarity_samples(const SaoModel& model, std::span<const BrownianGrid> paths,
                                         std::size_t t_star_index, double length,
                                         const SaoOptions& opts, unsigned threads) {
  if (paths.empty()) throw std::invalid_argument("stationarity_samples: no paths");
  StationaritySamples out;
  out.at_origin.resize(paths.size());
  out.shifted.resize(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t p) {
    const auto& path = paths[p];
    const double shift = static_cast<double>(t_star_index) * path.mesh;
    out.at_origin[p] = solve_domain(model, path, 0, path.origin + length, 1, opts).eigs[0];
    if (t_star_index == 0) {
      out.shifted[p] = out.at_origin[p];
    } else {
      out.shifted[p] =
          solve_domain(model, path, t_star_index, path.origin + shift + length, 1, opts).eigs[0] -
          shift;
    }
  });
  out.t_star = static_cast<double>(t_star_index) * paths[0].mesh;
  return out;
}

TestReport stationarity_shift_check(const SaoModel& model, std::span<const BrownianGrid> paths,
                                    std::size_t t_star_index, double length,
                                    const SaoOptions& opts, double level, unsigned threads) {
  if (paths.size() < 20) throw std::invalid_argument("stationarity_shift_check: need >= 20 paths");
  const auto samples = stationarity_samples(model, paths, t_star_index, length, opts, threads);
  auto report = ks_two_sample(samples.at_origin, samples.shifted, level);
  report.name = "sao_stationarity";
  report.metadata["t_star"] = format_double(samples.t_star);
  report.metadata["beta"] = format_double(model.beta);
  report.metadata["length"] = format_double(length);
  return report;
}

}  // namespace airyproc
