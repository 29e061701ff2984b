#include "airyproc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airyproc/format.hpp"

namespace airyproc {

namespace {

constexpr int kMaxSeriesTerms = 100000;
constexpr double kSeriesEps = 1e-16;
constexpr double kTiny = 1e-300;

// P(a, x) by its power series; valid for x < a + 1.
double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxSeriesTerms; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kSeriesEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_incomplete_gamma: series did not converge");
}

// Q(a, x) by Lentz's continued fraction; valid for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kSeriesEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("reg_incomplete_gamma: continued fraction did not converge");
}

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxSeriesTerms; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kSeriesEps) return h;
  }
  throw std::runtime_error("reg_incomplete_beta: continued fraction did not converge");
}

}  // namespace

TestReport make_report(std::string name, double statistic, double critical_value,
                       std::size_t n_samples) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.critical_value = critical_value;
  r.n_samples = n_samples;
  r.passed = statistic < critical_value;
  return r;
}

double reg_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("reg_incomplete_gamma: a must be positive");
  }
  if (!(x >= 0.0)) throw std::invalid_argument("reg_incomplete_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double p = x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
  return std::clamp(p, 0.0, 1.0);
}

double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("reg_incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("reg_incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  double value = 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    value = front * beta_continued_fraction(a, b, x) / a;
  } else {
    value = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  return std::clamp(value, 0.0, 1.0);
}

double gamma_cdf(double x, double shape, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("gamma_cdf: scale must be positive");
  if (x <= 0.0) return 0.0;
  return reg_incomplete_gamma(shape, x / scale);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return reg_incomplete_beta(a, b, x);
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double kolmogorov_coefficient(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("kolmogorov_coefficient: level must lie in (0,1)");
  }
  return std::sqrt(-0.5 * std::log(0.5 * level));
}

TestReport ks_one_sample(std::span<const double> samples, const Cdf& cdf, double level) {
  if (samples.size() < 20) throw std::invalid_argument("ks_one_sample: need at least 20 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, f - below, above - f});
  }
  auto report = make_report("ks_one_sample", d, kolmogorov_coefficient(level) / std::sqrt(n),
                            sorted.size());
  report.metadata["level"] = format_double(level);
  return report;
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level) {
  if (a.size() < 20 || b.size() < 20) {
    throw std::invalid_argument("ks_two_sample: need at least 20 samples on each side");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double critical = kolmogorov_coefficient(level) * std::sqrt((nx + ny) / (nx * ny));
  auto report = make_report("ks_two_sample", d, critical, x.size() + y.size());
  report.metadata["level"] = format_double(level);
  report.metadata["n_a"] = std::to_string(x.size());
  report.metadata["n_b"] = std::to_string(y.size());
  return report;
}

Moments moments(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("moments: need at least 2 samples");
  Moments m;
  m.n = samples.size();
  const double n = static_cast<double>(m.n);
  m.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double x : samples) {
    const double d = x - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2 * n / (n - 1.0);
  m.skewness = sample_skewness(samples);
  m.se_mean = std::sqrt(m.variance / n);
  const double var_of_var = (m4 - m.variance * m.variance * (n - 3.0) / (n - 1.0)) / n;
  m.se_variance = std::sqrt(std::max(var_of_var, 0.0));
  if (m.n > 2) {
    m.se_skewness = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
  }
  return m;
}

double sample_skewness(std::span<const double> samples) {
  const std::size_t count = samples.size();
  if (count < 3) return 0.0;
  const double n = static_cast<double>(count);
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0.0)) return 0.0;
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const std::function<double(std::span<const double>)>& statistic,
                                RngStream& stream, std::size_t resamples, double confidence) {
  if (samples.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
  if (resamples < 10) throw std::invalid_argument("bootstrap_ci: need at least 10 resamples");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("bootstrap_ci: confidence must lie in (0,1)");
  }
  ConfidenceInterval ci;
  ci.estimate = statistic(samples);
  std::vector<double> stats(resamples);
  std::vector<double> resample(samples.size());
  const auto n = static_cast<std::uint64_t>(samples.size());
  for (auto& s : stats) {
    for (auto& x : resample) {
      x = samples[static_cast<std::size_t>(stream.uniform() * static_cast<double>(n)) % n];
    }
    s = statistic(resample);
  }
  const double alpha = 1.0 - confidence;
  ci.lower = quantile(stats, 0.5 * alpha);
  ci.upper = quantile(std::move(stats), 1.0 - 0.5 * alpha);
  return ci;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least_squares_slope: x has no spread");
  return sxy / sxx;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace airyproc
