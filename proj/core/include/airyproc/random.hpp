#ifndef AIRYPROC_RANDOM_HPP
#define AIRYPROC_RANDOM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace airyproc {

/// Philox4x32-10 block function (counter-based, Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/**
 * Seeded, replayable random stream.
 *
 * A stream is identified by (master_seed, stream_index). The master seed is the
 * Philox key and the stream index occupies the upper half of the counter, so
 * every replica gets its own non-overlapping sequence of 2^64 blocks without
 * any jump-ahead cost. Copying a stream copies its position.
 */
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1); safe for log().
  double uniform_open();
  /// Standard normal (Marsaglia polar method, spare value cached).
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::optional<double> spare_normal_;
};

struct GammaParams {
  double shape;
  double scale;
};

double sample_gaussian(RngStream& stream, double mean, double variance);
double sample_gamma(RngStream& stream, GammaParams p);
/// Chi with real-valued degrees of freedom, sqrt(2 * Gamma(dof/2, 1)).
double sample_chi(RngStream& stream, double dof);
std::vector<double> sample_dirichlet(RngStream& stream, std::size_t n, double alpha);

}  // namespace airyproc

#endif  // AIRYPROC_RANDOM_HPP
