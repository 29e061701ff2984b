#include "airyproc/minor_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "airyproc/parallel.hpp"
#include "airyproc/tridiag.hpp"

namespace airyproc {

namespace {

struct MinorSolve {
  std::size_t removed = 0;
  double tol = 0.0;
  std::vector<double> eigs;  // unscaled
  std::vector<double> first_entries;
};

MinorSolve solve_minor(const EnsembleDraw& draw, std::size_t removed, std::size_t num_eigs,
                       double tol_override) {
  const auto t = edge_minor_matrix(draw, removed);
  MinorSolve out;
  out.removed = removed;
  out.tol = tol_override > 0.0 ? tol_override : default_tolerance(t);
  const auto pairs = lowest_pairs(t, num_eigs, out.tol);
  out.eigs.reserve(num_eigs);
  out.first_entries.reserve(num_eigs);
  for (const auto& p : pairs) {
    out.eigs.push_back(p.eigenvalue);
    out.first_entries.push_back(p.first_entry);
  }
  return out;
}

// Cauchy interlacing of the minor with r = b.removed - a.removed further rows
// deleted: lambda_i(a) <= lambda_i(b) <= lambda_{i+r}(a).
void check_interlacing(const MinorSolve& a, const MinorSolve& b) {
  const double slack = 2.0 * std::max(a.tol, b.tol);
  const std::size_t r = b.removed - a.removed;
  for (std::size_t i = 0; i < b.eigs.size(); ++i) {
    const bool below = b.eigs[i] < a.eigs[i] - slack;
    const bool above = i + r < a.eigs.size() && b.eigs[i] > a.eigs[i + r] + slack;
    if (below || above) {
      throw InterlacingViolation("minor " + std::to_string(b.removed) + " eigenvalue " +
                                 std::to_string(i) + " does not interlace with minor " +
                                 std::to_string(a.removed));
    }
  }
}

TrajectoryFrame make_frame(double t, const MinorSolve& solve, const BetaEnsembleSpec& spec) {
  TrajectoryFrame f;
  f.t = t;
  f.removed = solve.removed;
  const double s = edge_scale(spec.n);
  const double n = static_cast<double>(spec.n);
  for (std::size_t i = 0; i < solve.eigs.size(); ++i) {
    const double scaled = s * solve.eigs[i];
    const double q = solve.first_entries[i] * solve.first_entries[i];
    f.scaled_eigs.push_back(scaled);
    f.recentered.push_back(scaled - t);
    f.spectral_weights.push_back(q);
    f.derivative_est.push_back(n * q);
  }
  return f;
}

}  // namespace

std::size_t minor_index(double t, std::size_t n) {
  if (!(t >= 0.0)) throw std::invalid_argument("minor_index: t must be >= 0");
  const double v = t * std::cbrt(static_cast<double>(n));
  return static_cast<std::size_t>(std::floor(v * (1.0 + 1e-12)));
}

std::size_t rows_for(const BetaEnsembleSpec& spec, std::size_t max_removed, std::size_t num_eigs,
                     const MinorOptions& opts) {
  if (!(opts.window > 0.0)) return spec.n;
  const double extra = std::ceil(opts.window * std::cbrt(static_cast<double>(spec.n)));
  const double rows = static_cast<double>(max_removed + num_eigs) + extra + 2.0;
  return rows >= static_cast<double>(spec.n) ? spec.n : static_cast<std::size_t>(rows);
}

Trajectory compute_trajectory(const BetaEnsembleSpec& spec, RngStream& stream,
                              std::size_t num_eigs, double t_max, double dt,
                              const MinorOptions& opts) {
  spec.validate();
  if (num_eigs == 0) throw std::invalid_argument("compute_trajectory: num_eigs must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("compute_trajectory: dt must be positive");
  }
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("compute_trajectory: t_max must be >= 0");
  }
  const double n = static_cast<double>(spec.n);
  if (t_max * std::cbrt(n) + static_cast<double>(num_eigs) > n - 2.0) {
    throw std::invalid_argument("compute_trajectory: time grid exhausts the matrix "
                                "(need t_max n^{1/3} + num_eigs <= n - 2)");
  }

  const auto num_frames = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12))) + 1;
  const std::size_t max_removed = minor_index(static_cast<double>(num_frames - 1) * dt, spec.n);

  Trajectory traj;
  traj.spec = spec;
  traj.seed = {stream.master_seed(), stream.stream_index()};
  traj.num_eigs = num_eigs;
  traj.dt = dt;
  traj.rows_used = rows_for(spec, max_removed, num_eigs, opts);
  const auto draw = sample_hermite_leading(spec, stream, traj.rows_used);

  traj.frames.reserve(num_frames);
  MinorSolve current;
  bool have_current = false;
  for (std::size_t f = 0; f < num_frames; ++f) {
    const double t = static_cast<double>(f) * dt;
    const std::size_t removed = minor_index(t, spec.n);
    if (!have_current || removed != current.removed) {
      auto next = solve_minor(draw, removed, num_eigs, opts.tol);
      if (have_current) check_interlacing(current, next);
      current = std::move(next);
      have_current = true;
    }
    traj.frames.push_back(make_frame(t, current, spec));
  }
  return traj;
}

std::vector<Trajectory> trajectory_replicas(const BetaEnsembleSpec& spec, std::uint64_t master_seed,
                                            std::size_t reps, std::size_t num_eigs, double t_max,
                                            double dt, const MinorOptions& opts) {
  std::vector<Trajectory> out(reps);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    RngStream stream(master_seed, r);
    out[r] = compute_trajectory(spec, stream, num_eigs, t_max, dt, opts);
  });
  return out;
}

std::vector<std::vector<double>> spectral_weight_samples(const BetaEnsembleSpec& spec,
                                                         std::uint64_t master_seed,
                                                         std::size_t num_eigs, std::size_t reps,
                                                         const MinorOptions& opts) {
  spec.validate();
  if (num_eigs == 0 || num_eigs > spec.n) {
    throw std::invalid_argument("spectral_weight_samples: num_eigs must lie in [1, n]");
  }
  const std::size_t rows = rows_for(spec, 0, num_eigs, opts);
  std::vector<std::vector<double>> out(reps);
  const double n = static_cast<double>(spec.n);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    RngStream stream(master_seed, r);
    const auto draw = sample_hermite_leading(spec, stream, rows);
    const auto solve = solve_minor(draw, 0, num_eigs, opts.tol);
    std::vector<double> row(num_eigs);
    for (std::size_t i = 0; i < num_eigs; ++i) {
      row[i] = n * solve.first_entries[i] * solve.first_entries[i];
    }
    out[r] = std::move(row);
  });
  return out;
}

FiniteDifferences derivative_by_finite_difference(const Trajectory& traj, std::size_t i) {
  if (i >= traj.num_eigs) throw std::invalid_argument("derivative_by_finite_difference: bad index");
  const double spacing = 1.0 / std::cbrt(static_cast<double>(traj.spec.n));
  FiniteDifferences out;
  const TrajectoryFrame* prev = nullptr;
  for (const auto& frame : traj.frames) {
    if (prev != nullptr && frame.removed != prev->removed) {
      const double delta = static_cast<double>(frame.removed - prev->removed) * spacing;
      out.t.push_back(prev->t);
      out.quotient.push_back((frame.scaled_eigs[i] - prev->scaled_eigs[i]) / delta);
    }
    if (prev == nullptr || frame.removed != prev->removed) prev = &frame;
  }
  return out;
}

double LinearityProfile::scaled_bound() const {
  const double s = edge_scale(n);
  double bound = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) {
    bound = std::max(bound, s * deviation[j] / (x[j] * x[j]));
  }
  return bound;
}

LinearityProfile eigvec_linearity_profile(const BetaEnsembleSpec& spec, RngStream& stream,
                                          std::size_t i, double x0, const MinorOptions& opts) {
  spec.validate();
  const double c = std::cbrt(static_cast<double>(spec.n));
  if (!(x0 > 0.0) || x0 * c > static_cast<double>(spec.n)) {
    throw std::invalid_argument("eigvec_linearity_profile: need 0 < x0 n^{1/3} <= n");
  }
  const auto last = static_cast<std::size_t>(std::floor(x0 * c * (1.0 + 1e-12)));
  const std::size_t rows = std::max(rows_for(spec, last, i + 1, opts), std::min(spec.n, last + 2));
  const auto draw = sample_hermite_leading(spec, stream, rows);
  const auto t = edge_minor_matrix(draw, 0);
  if (i >= t.size()) throw std::invalid_argument("eigvec_linearity_profile: index too large");
  const double tol = opts.tol > 0.0 ? opts.tol : default_tolerance(t);
  const auto pairs = lowest_pairs(t, i + 1, tol);
  const auto& v = pairs[i].eigenvector;

  LinearityProfile prof;
  prof.n = spec.n;
  prof.first_entry = v[0];
  prof.x.resize(last + 1);
  prof.deviation.resize(last + 1);
  for (std::size_t j = 0; j <= last; ++j) {
    prof.x[j] = static_cast<double>(j) / c;
    prof.deviation[j] = j == 0 ? 0.0 : std::abs(v[j - 1] - static_cast<double>(j) * v[0]);
  }
  return prof;
}

AsymmetryReport reversibility_asymmetry(std::span<const double> quotients, RngStream& stream,
                                        std::size_t resamples, double confidence) {
  if (quotients.size() < 1000) {
    throw std::invalid_argument("reversibility_asymmetry: need at least 1000 samples");
  }
  std::vector<double> centered(quotients.begin(), quotients.end());
  for (double& x : centered) x -= 1.0;
  const auto ci = bootstrap_ci(
      centered, [](std::span<const double> s) { return sample_skewness(s); }, stream, resamples,
      confidence);
  AsymmetryReport r;
  r.skewness = ci.estimate;
  r.ci_lower = ci.lower;
  r.ci_upper = ci.upper;
  r.confidence = confidence;
  r.n_samples = centered.size();
  r.positive = ci.lower > 0.0;
  return r;
}

}  // namespace airyproc
