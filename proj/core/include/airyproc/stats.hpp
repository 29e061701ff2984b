#ifndef AIRYPROC_STATS_HPP
#define AIRYPROC_STATS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "airyproc/random.hpp"

namespace airyproc {

/// Outcome of one statistical or deterministic check. passed == (statistic < critical_value).
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double critical_value = 0.0;
  std::size_t n_samples = 0;
  bool passed = false;
  std::map<std::string, std::string> metadata;
};

TestReport make_report(std::string name, double statistic, double critical_value,
                       std::size_t n_samples);

/// Regularized lower incomplete gamma P(a, x).
double reg_incomplete_gamma(double a, double x);
/// Regularized incomplete beta I_x(a, b).
double reg_incomplete_beta(double a, double b, double x);

double gamma_cdf(double x, double shape, double scale);
double beta_cdf(double x, double a, double b);
double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// Asymptotic Kolmogorov critical coefficient sqrt(-ln(level / 2) / 2); 1.628 at 1%.
double kolmogorov_coefficient(double level);

using Cdf = std::function<double(double)>;

TestReport ks_one_sample(std::span<const double> samples, const Cdf& cdf, double level = 0.01);
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double level = 0.01);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // bias-corrected (G1)
  double se_mean = 0.0;
  double se_variance = 0.0;
  double se_skewness = 0.0;
};

Moments moments(std::span<const double> samples);

/// Adjusted Fisher-Pearson sample skewness G1 (0 for constant samples).
double sample_skewness(std::span<const double> samples);

struct ConfidenceInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Percentile bootstrap interval at the given two-sided confidence.
ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const std::function<double(std::span<const double>)>& statistic,
                                RngStream& stream, std::size_t resamples, double confidence);

/// Ordinary least-squares slope of y on x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

double quantile(std::vector<double> values, double p);

}  // namespace airyproc

#endif  // AIRYPROC_STATS_HPP
