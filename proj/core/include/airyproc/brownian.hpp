#ifndef AIRYPROC_BROWNIAN_HPP
#define AIRYPROC_BROWNIAN_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "airyproc/random.hpp"

namespace airyproc {

/**
 * Increments of one Brownian path on a uniform mesh.
 *
 * increments[c] = b(origin + (c + 1) * mesh) - b(origin + c * mesh).
 * Every shifted-domain solve reads from the same grid; nothing is resampled.
 */
struct BrownianGrid {
  double mesh = 0.0;
  double origin = 0.0;
  std::vector<double> increments;

  std::size_t num_cells() const { return increments.size(); }
  double extent() const { return origin + mesh * static_cast<double>(increments.size()); }
  /// b at grid point c (b(origin) = 0).
  double value_at(std::size_t c) const;
  /// Sum adjacent cells in groups of `factor` (same path on a coarser mesh).
  BrownianGrid coarsened(std::size_t factor) const;
};

BrownianGrid sample_brownian_grid(RngStream& stream, double mesh, std::size_t num_cells);

/// CSV with a `# mesh=... origin=... cells=...` header; values written in
/// shortest round-trip form so that a reload replays the path bit-exactly.
void write_brownian_csv(std::ostream& out, const BrownianGrid& path);
BrownianGrid read_brownian_csv(std::istream& in);

}  // namespace airyproc

#endif  // AIRYPROC_BROWNIAN_HPP
