#include "airyproc/io.hpp"

#include <ostream>

#include "airyproc/format.hpp"
#include "json.hpp"

namespace airyproc {

namespace {

nlohmann::ordered_json report_to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  j["critical_value"] = r.critical_value;
  j["n_samples"] = r.n_samples;
  j["passed"] = r.passed;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

nlohmann::ordered_json moments_to_json(const Moments& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  j["skewness"] = m.skewness;
  j["se_mean"] = m.se_mean;
  j["se_variance"] = m.se_variance;
  j["se_skewness"] = m.se_skewness;
  return j;
}

}  // namespace

void write_metadata_block(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Metadata& meta) {
  write_metadata_block(out, meta);
  out << "t,eig_index,scaled_eig,recentered,deriv_est\n";
  for (const auto& f : traj.frames) {
    for (std::size_t i = 0; i < f.scaled_eigs.size(); ++i) {
      out << format_double(f.t) << ',' << (i + 1) << ',' << format_double(f.scaled_eigs[i]) << ','
          << format_double(f.recentered[i]) << ',' << format_double(f.derivative_est[i]) << '\n';
    }
  }
}

void write_sao_csv(std::ostream& out, const std::vector<SaoRow>& rows, const Metadata& meta) {
  write_metadata_block(out, meta);
  out << "t,j,lambda,slope,slope_sq,fd_quotient,rel_err\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << r.j << ',' << format_double(r.lambda) << ','
        << format_double(r.slope) << ',' << format_double(r.slope_sq) << ','
        << format_double(r.fd_quotient) << ',' << format_double(r.rel_err) << '\n';
  }
}

std::string report_json(const TestReport& report, int indent) {
  return report_to_json(report).dump(indent);
}

std::string summary_json(const BetaEnsembleSpec& spec, const SeedRecord& seed,
                         const std::vector<std::pair<std::string, Moments>>& moments,
                         const std::vector<TestReport>& ks_reports, const Metadata& config) {
  nlohmann::ordered_json j;
  j["spec"] = {{"n", spec.n}, {"beta", spec.beta}};
  j["seed"] = {{"master_seed", seed.master_seed}, {"stream_index", seed.stream_index}};
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [name, value] : moments) m[name] = moments_to_json(value);
  j["moments"] = m;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (const auto& r : ks_reports) reports.push_back(report_to_json(r));
  j["ks_reports"] = reports;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  return j.dump(2);
}

}  // namespace airyproc
