#ifndef AIRYPROC_IO_HPP
#define AIRYPROC_IO_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "airyproc/minor_process.hpp"
#include "airyproc/sao.hpp"
#include "airyproc/stats.hpp"

namespace airyproc {

/// Ordered key/value pairs echoed at the top of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` lines.
void write_metadata_block(std::ostream& out, const Metadata& meta);

/// Header `t,eig_index,scaled_eig,recentered,deriv_est`; eig_index is 1-based.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Metadata& meta);

struct SaoRow {
  double t = 0.0;
  std::size_t j = 0;  // 1-based
  double lambda = 0.0;
  double slope = 0.0;
  double slope_sq = 0.0;
  double fd_quotient = 0.0;
  double rel_err = 0.0;
};

/// Header `t,j,lambda,slope,slope_sq,fd_quotient,rel_err`.
void write_sao_csv(std::ostream& out, const std::vector<SaoRow>& rows, const Metadata& meta);

std::string report_json(const TestReport& report, int indent = 2);

/// {"spec": {...}, "seed": {...}, "moments": {...}, "ks_reports": [...], "config": {...}}
std::string summary_json(const BetaEnsembleSpec& spec, const SeedRecord& seed,
                         const std::vector<std::pair<std::string, Moments>>& moments,
                         const std::vector<TestReport>& ks_reports, const Metadata& config);

}  // namespace airyproc

#endif  // AIRYPROC_IO_HPP
