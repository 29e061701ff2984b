#include "airyproc/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace airyproc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

double gamma_marsaglia_tsang(RngStream& stream, double shape) {
  // shape >= 1
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = stream.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), stream_(stream_index) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_counter_), static_cast<std::uint32_t>(block_counter_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
  ++block_counter_;
}

std::uint64_t RngStream::next_u64() {
  if (buffered_ == 0) refill();
  // Consume buffer_[0] first, then buffer_[1].
  return buffer_[2 - buffered_--];
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  return u * factor;
}

double sample_gaussian(RngStream& stream, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("sample_gaussian: variance must be positive, got " +
                                std::to_string(variance));
  }
  return mean + std::sqrt(variance) * stream.normal();
}

double sample_gamma(RngStream& stream, GammaParams p) {
  if (!(p.shape > 0.0) || !(p.scale > 0.0) || !std::isfinite(p.shape) || !std::isfinite(p.scale)) {
    throw std::invalid_argument("sample_gamma: shape and scale must be positive and finite");
  }
  if (p.shape >= 1.0) return p.scale * gamma_marsaglia_tsang(stream, p.shape);
  // Gamma(a) = Gamma(a + 1) * U^(1/a), evaluated in log space.
  const double boosted = gamma_marsaglia_tsang(stream, p.shape + 1.0);
  const double log_u = std::log(stream.uniform_open());
  return p.scale * std::exp(std::log(boosted) + log_u / p.shape);
}

double sample_chi(RngStream& stream, double dof) {
  if (!(dof > 0.0) || !std::isfinite(dof)) {
    throw std::invalid_argument("sample_chi: dof must be positive, got " + std::to_string(dof));
  }
  return std::sqrt(2.0 * sample_gamma(stream, {0.5 * dof, 1.0}));
}

std::vector<double> sample_dirichlet(RngStream& stream, std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("sample_dirichlet: n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("sample_dirichlet: alpha must be positive");
  }
  if (n == 1) return {1.0};
  std::vector<double> q(n);
  double total = 0.0;
  for (auto& x : q) {
    x = sample_gamma(stream, {alpha, 1.0});
    total += x;
  }
  if (!(total > 0.0)) throw std::runtime_error("sample_dirichlet: all gamma draws underflowed");
  for (auto& x : q) x /= total;
  return q;
}

}  // namespace airyproc
