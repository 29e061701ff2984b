// airyproc: command-line driver for the minor-process and stochastic Airy experiments.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "airyproc/brownian.hpp"
#include "airyproc/format.hpp"
#include "airyproc/io.hpp"
#include "airyproc/minor_process.hpp"
#include "airyproc/sao.hpp"
#include "airyproc/stats.hpp"
#include "airyproc/verify.hpp"

namespace {

using namespace airyproc;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kDefaultSeed = 20261015;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AIRYPROC_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("AIRYPROC_SEED is not an unsigned integer: " + std::string(env));
  }
  return kDefaultSeed;
}

double parse_beta(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  try {
    v = parse_double(text);
  } catch (const std::invalid_argument&) {
    v = 0.0;
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError("--beta must be a positive number or inf, got '" + text + "'");
  }
  return v;
}

std::string beta_text(double beta) { return std::isinf(beta) ? "inf" : format_double(beta); }

/// Output sink: a file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// --- shared flags -----------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed (default: $AIRYPROC_SEED or 20261015)");
  sub->add_option("--threads", c.threads, "Replica-level worker threads (0 = all cores)")
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: stdout)");
}

Metadata base_metadata(const std::string& command, const Common& c) {
  return {{"command", command}, {"seed", std::to_string(c.seed)}};
}

// --- trajectory ---------------------------------------------------------------

struct TrajectoryArgs {
  Common common;
  std::size_t n = 0;
  std::string beta = "2";
  std::size_t num_eigs = 5;
  double t_max = 2.0;
  double dt = 0.01;
  double window = 0.0;
  std::uint64_t stream = 0;
  std::string summary;
};

int run_trajectory(const TrajectoryArgs& a) {
  const BetaEnsembleSpec spec{a.n, parse_beta(a.beta)};
  if (std::isinf(spec.beta)) throw UsageError("trajectory needs a finite --beta");
  MinorOptions opts;
  opts.window = a.window;
  RngStream stream(a.common.seed, a.stream);
  const auto traj = compute_trajectory(spec, stream, a.num_eigs, a.t_max, a.dt, opts);

  auto meta = base_metadata("trajectory", a.common);
  meta.insert(meta.end(), {{"n", std::to_string(a.n)},
                           {"beta", beta_text(spec.beta)},
                           {"num_eigs", std::to_string(a.num_eigs)},
                           {"t_max", format_double(a.t_max)},
                           {"dt", format_double(a.dt)},
                           {"window", format_double(a.window)},
                           {"stream", std::to_string(a.stream)},
                           {"rows_used", std::to_string(traj.rows_used)}});
  Sink sink(a.common.out);
  write_trajectory_csv(sink.stream(), traj, meta);

  if (!a.summary.empty()) {
    std::vector<std::pair<std::string, Moments>> m;
    for (std::size_t i = 0; i < a.num_eigs; ++i) {
      std::vector<double> rec;
      std::vector<double> der;
      for (const auto& f : traj.frames) {
        rec.push_back(f.recentered[i]);
        der.push_back(f.derivative_est[i]);
      }
      m.emplace_back("recentered_" + std::to_string(i + 1), moments(rec));
      m.emplace_back("deriv_est_" + std::to_string(i + 1), moments(der));
    }
    Sink js(a.summary);
    js.stream() << summary_json(spec, traj.seed, m, {}, meta) << '\n';
  }
  return kExitOk;
}

// --- derivative-dist ----------------------------------------------------------

struct DerivativeArgs {
  Common common;
  std::size_t n = 0;
  std::string beta = "2";
  std::size_t num_eigs = 3;
  std::size_t reps = 5000;
  double window = 0.0;
  std::string samples_out;
};

int run_derivative(const DerivativeArgs& a) {
  const BetaEnsembleSpec spec{a.n, parse_beta(a.beta)};
  if (std::isinf(spec.beta)) throw UsageError("derivative-dist needs a finite --beta");
  MinorOptions opts;
  opts.window = a.window;
  opts.threads = a.common.threads;
  const auto samples = spectral_weight_samples(spec, a.common.seed, a.num_eigs, a.reps, opts);

  auto meta = base_metadata("derivative-dist", a.common);
  meta.insert(meta.end(), {{"n", std::to_string(a.n)},
                           {"beta", beta_text(spec.beta)},
                           {"num_eigs", std::to_string(a.num_eigs)},
                           {"reps", std::to_string(a.reps)},
                           {"window", format_double(a.window)}});

  std::vector<std::pair<std::string, Moments>> m;
  std::vector<TestReport> reports;
  bool all = true;
  const double shape = spec.beta / 2.0;
  const double scale = 2.0 / spec.beta;
  for (std::size_t i = 0; i < a.num_eigs; ++i) {
    std::vector<double> col(samples.size());
    for (std::size_t r = 0; r < samples.size(); ++r) col[r] = samples[r][i];
    m.emplace_back("n_q_" + std::to_string(i + 1), moments(col));
    auto ks = ks_one_sample(col, [&](double x) { return gamma_cdf(x, shape, scale); });
    ks.name = "ks_gamma_i=" + std::to_string(i + 1);
    all = all && ks.passed;
    reports.push_back(std::move(ks));
  }
  Sink sink(a.common.out);
  sink.stream() << summary_json(spec, {a.common.seed, 0}, m, reports, meta) << '\n';

  if (!a.samples_out.empty()) {
    Sink s(a.samples_out);
    write_metadata_block(s.stream(), meta);
    s.stream() << "rep,i,n_q\n";
    for (std::size_t r = 0; r < samples.size(); ++r) {
      for (std::size_t i = 0; i < a.num_eigs; ++i) {
        s.stream() << r << ',' << i + 1 << ',' << format_double(samples[r][i]) << '\n';
      }
    }
  }
  return all ? kExitOk : kExitFailure;
}

// --- sao ------------------------------------------------------------------------

struct SaoArgs {
  Common common;
  std::string beta = "2";
  double h = 5e-4;
  double L = 8.0;
  std::size_t num_eigs = 3;
  double t_max = 1.0;
  double dt = 0.25;
  std::size_t window_cells = 50;
  double tol = 1e-9;
  std::string slope = "one-sided";
  std::string path_in;
  std::string path_out;
};

std::size_t cells_of(double x, double h) {
  const double c = x / h;
  const double r = std::round(c);
  if (std::abs(c - r) > 1e-9 * std::max(1.0, c)) {
    throw UsageError("grid value " + format_double(x) + " is not a multiple of --h");
  }
  return static_cast<std::size_t>(r);
}

int run_sao(const SaoArgs& a) {
  const SaoModel model{parse_beta(a.beta)};
  if (!(a.h > 0.0) || !(a.L > 0.0) || !(a.dt > 0.0) || a.t_max < 0.0) {
    throw UsageError("--h, --L and --dt must be positive and --t-max non-negative");
  }
  SaoOptions opts;
  opts.tol = a.tol;
  if (a.slope == "one-sided") {
    opts.slope = SlopeRule::OneSided;
  } else if (a.slope == "three-point") {
    opts.slope = SlopeRule::ThreePoint;
  } else {
    throw UsageError("--slope must be one-sided or three-point");
  }

  BrownianGrid path;
  if (!a.path_in.empty()) {
    std::ifstream in(a.path_in);
    if (!in) throw UsageError("cannot open --path-in " + a.path_in);
    path = read_brownian_csv(in);
    if (path.mesh != a.h) throw UsageError("--path-in mesh differs from --h");
  } else {
    RngStream stream(a.common.seed, 0);
    path = sample_brownian_grid(stream, a.h, cells_of(a.L, a.h));
  }
  if (!a.path_out.empty()) {
    Sink p(a.path_out);
    write_brownian_csv(p.stream(), path);
  }

  const std::size_t steps = static_cast<std::size_t>(std::floor(a.t_max / a.dt + 1e-9));
  std::vector<SaoRow> rows;
  for (std::size_t s = 0; s <= steps; ++s) {
    const std::size_t t_index = cells_of(static_cast<double>(s) * a.dt, a.h);
    const auto checks = derivative_check(model, path, t_index, a.num_eigs, a.window_cells, a.L, opts);
    for (const auto& c : checks) {
      rows.push_back({c.t, c.j + 1, c.lambda, c.slope, c.slope_squared, c.fd_quotient, c.rel_err});
    }
  }

  auto meta = base_metadata("sao", a.common);
  meta.insert(meta.end(), {{"beta", beta_text(model.beta)},
                           {"h", format_double(a.h)},
                           {"L", format_double(a.L)},
                           {"num_eigs", std::to_string(a.num_eigs)},
                           {"t_max", format_double(a.t_max)},
                           {"dt", format_double(a.dt)},
                           {"window_cells", std::to_string(a.window_cells)},
                           {"tol", format_double(a.tol)},
                           {"slope", a.slope},
                           {"path", a.path_in.empty() ? "sampled" : "file"}});
  Sink sink(a.common.out);
  write_sao_csv(sink.stream(), rows, meta);
  return kExitOk;
}

// --- stationarity -----------------------------------------------------------------

struct StationarityArgs {
  Common common;
  std::string model = "minor";
  std::string beta = "2";
  std::size_t n = 100000;
  std::size_t reps = 1000;
  double window = 30.0;
  double t_star = 1.0;
  double h = 5e-4;
  double length = 8.0;
};

int run_stationarity(const StationarityArgs& a) {
  const double beta = parse_beta(a.beta);
  auto meta = base_metadata("stationarity", a.common);
  meta.insert(meta.end(), {{"model", a.model},
                           {"beta", beta_text(beta)},
                           {"reps", std::to_string(a.reps)},
                           {"t_star", format_double(a.t_star)}});
  TestReport report;
  if (a.model == "minor") {
    if (std::isinf(beta)) throw UsageError("--model minor needs a finite --beta");
    const BetaEnsembleSpec spec{a.n, beta};
    MinorOptions opts;
    opts.window = a.window;
    opts.threads = a.common.threads;
    // Replicas [0, reps) feed t = 0 and [reps, 2 reps) feed t*, so the samples are independent.
    const auto trajs = trajectory_replicas(spec, a.common.seed, 2 * a.reps, 1, a.t_star,
                                           a.t_star, opts);
    std::vector<double> at_zero(a.reps);
    std::vector<double> at_star(a.reps);
    for (std::size_t r = 0; r < a.reps; ++r) {
      at_zero[r] = trajs[r].frames.front().recentered[0];
      at_star[r] = trajs[a.reps + r].frames.back().recentered[0];
    }
    report = ks_two_sample(at_zero, at_star);
    report.name = "minor_stationarity";
    meta.insert(meta.end(), {{"n", std::to_string(a.n)}, {"window", format_double(a.window)}});
  } else if (a.model == "sao") {
    const SaoModel model{beta};
    const std::size_t t_index = cells_of(a.t_star, a.h);
    const std::size_t cells = t_index + cells_of(a.length, a.h);
    std::vector<BrownianGrid> paths(a.reps);
    for (std::size_t p = 0; p < a.reps; ++p) {
      RngStream s(a.common.seed, p);
      paths[p] = sample_brownian_grid(s, a.h, cells);
    }
    report = stationarity_shift_check(model, paths, t_index, a.length, {}, 0.01, a.common.threads);
    meta.insert(meta.end(), {{"h", format_double(a.h)}, {"length", format_double(a.length)}});
  } else {
    throw UsageError("--model must be sao or minor");
  }
  for (const auto& [k, v] : meta) report.metadata[k] = v;
  Sink sink(a.common.out);
  sink.stream() << report_json(report) << '\n';
  return report.passed ? kExitOk : kExitFailure;
}

// --- verify ---------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  bool quick = false;
  std::vector<int> only;
};

int run_verify_cmd(const VerifyArgs& a) {
  verify::VerifyConfig cfg;
  cfg.seed = a.common.seed;
  cfg.threads = a.common.threads;
  cfg.quick = a.quick;
  cfg.only = a.only;
  for (int id : cfg.only) {
    if (id < 1 || id > verify::kNumCriteria) {
      throw UsageError("--only takes criterion ids 1.." + std::to_string(verify::kNumCriteria));
    }
  }
  const auto results = verify::run_verify(cfg, &std::cout);
  if (!a.common.out.empty()) {
    Sink sink(a.common.out);
    sink.stream() << verify::results_json(results, cfg) << '\n';
  }
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (failed == 0 ? "all " : "") << results.size() - failed << '/' << results.size()
            << " criteria passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

// --- config file ------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Lines `key=value` (blank lines and `#` comments ignored) become `--key=value`.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open --config " + path);
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key == "config") throw UsageError(path + ": config files cannot nest");
    out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return out;
}

/**
 * Splice config-file flags in right after the subcommand token. Options keep
 * their last value, so anything given on the command line overrides the file.
 */
std::vector<std::string> expand_config(int argc, char** argv,
                                       const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      injected = config_args(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      injected = config_args(args[i].substr(9));
    } else {
      out.push_back(args[i]);
    }
  }
  if (injected.empty()) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : subcommands) {
      if (out[i] == s) {
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(i) + 1, injected.begin(),
                   injected.end());
        return out;
      }
    }
  }
  throw UsageError("--config needs a subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minor-process and stochastic Airy operator experiments"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");  // -h is taken by the mesh flag
  app.footer(
      "Every subcommand also accepts --config FILE: key=value lines that pre-populate its flags.\n"
      "Flags on the command line win. AIRYPROC_SEED sets the default --seed.");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  TrajectoryArgs traj;
  DerivativeArgs deriv;
  SaoArgs sao;
  StationarityArgs stat;
  VerifyArgs ver;

  auto* c_traj = app.add_subcommand("trajectory", "Lowest eigenvalues of nested minors, CSV");
  add_common(c_traj, traj.common);
  c_traj->add_option("--n", traj.n, "Matrix size")->required();
  c_traj->add_option("--beta", traj.beta, "Ensemble parameter")->capture_default_str();
  c_traj->add_option("--num-eigs", traj.num_eigs, "Eigenvalues per minor")->capture_default_str();
  c_traj->add_option("--t-max", traj.t_max, "Last rescaled time")->capture_default_str();
  c_traj->add_option("--dt", traj.dt, "Time step")->capture_default_str();
  c_traj->add_option("--window", traj.window, "Truncation window in rescaled units (0 = full)")
      ->capture_default_str();
  c_traj->add_option("--stream", traj.stream, "Replica stream index")->capture_default_str();
  c_traj->add_option("--summary", traj.summary, "Write a JSON summary to this file");

  auto* c_deriv = app.add_subcommand("derivative-dist", "n q_i samples against Gamma(beta/2, 2/beta)");
  add_common(c_deriv, deriv.common);
  c_deriv->add_option("--n", deriv.n, "Matrix size")->required();
  c_deriv->add_option("--beta", deriv.beta, "Ensemble parameter")->capture_default_str();
  c_deriv->add_option("--num-eigs", deriv.num_eigs, "Indices i = 1..num_eigs")->capture_default_str();
  c_deriv->add_option("--reps", deriv.reps, "Replicas")->capture_default_str();
  c_deriv->add_option("--window", deriv.window, "Truncation window (0 = full)")->capture_default_str();
  c_deriv->add_option("--samples-out", deriv.samples_out, "Write the raw samples as CSV");

  auto* c_sao = app.add_subcommand("sao", "Discretized stochastic Airy operator on [t, L], CSV");
  add_common(c_sao, sao.common);
  c_sao->add_option("--beta", sao.beta, "Noise parameter, or inf")->capture_default_str();
  c_sao->add_option("--h", sao.h, "Mesh")->capture_default_str();
  c_sao->add_option("--L", sao.L, "Right wall")->capture_default_str();
  c_sao->add_option("--num-eigs", sao.num_eigs, "Eigenvalues per domain")->capture_default_str();
  c_sao->add_option("--t-max", sao.t_max, "Last left endpoint")->capture_default_str();
  c_sao->add_option("--dt", sao.dt, "Left-endpoint step")->capture_default_str();
  c_sao->add_option("--window-cells", sao.window_cells, "Finite-difference step in cells")
      ->capture_default_str();
  c_sao->add_option("--tol", sao.tol, "Absolute eigenvalue tolerance")->capture_default_str();
  c_sao->add_option("--slope", sao.slope, "one-sided or three-point")->capture_default_str();
  c_sao->add_option("--path-in", sao.path_in, "Read the Brownian path from CSV");
  c_sao->add_option("--path-out", sao.path_out, "Write the Brownian path to CSV");

  auto* c_stat = app.add_subcommand("stationarity", "Two-sample KS between t = 0 and t = t*");
  add_common(c_stat, stat.common);
  c_stat->add_option("--model", stat.model, "minor or sao")->capture_default_str();
  c_stat->add_option("--beta", stat.beta, "Ensemble parameter (inf allowed for sao)")
      ->capture_default_str();
  c_stat->add_option("--n", stat.n, "Matrix size (minor)")->capture_default_str();
  c_stat->add_option("--reps", stat.reps, "Samples per side")->capture_default_str();
  c_stat->add_option("--window", stat.window, "Truncation window (minor)")->capture_default_str();
  c_stat->add_option("--t-star", stat.t_star, "Shift")->capture_default_str();
  c_stat->add_option("--h", stat.h, "Mesh (sao)")->capture_default_str();
  c_stat->add_option("--length", stat.length, "Domain length (sao)")->capture_default_str();

  auto* c_ver = app.add_subcommand("verify", "Run the acceptance criteria");
  add_common(c_ver, ver.common);
  c_ver->add_flag("--quick", ver.quick, "Exact criteria and the reproducibility rerun only");
  c_ver->add_option("--only", ver.only, "Run only these criterion ids")->delimiter(',');
  ver.common.threads = 0;

  try {
    const auto seed = default_seed();
    for (Common* c : {&traj.common, &deriv.common, &sao.common, &stat.common, &ver.common}) {
      c->seed = seed;
    }
    auto args = expand_config(argc, argv, {"trajectory", "derivative-dist", "sao", "stationarity", "verify"});
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "airyproc: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_traj->parsed()) return run_trajectory(traj);
    if (c_deriv->parsed()) return run_derivative(deriv);
    if (c_sao->parsed()) return run_sao(sao);
    if (c_stat->parsed()) return run_stationarity(stat);
    if (c_ver->parsed()) return run_verify_cmd(ver);
  } catch (const UsageError& e) {
    std::cerr << "airyproc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "airyproc: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "airyproc: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
