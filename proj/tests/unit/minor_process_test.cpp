#include "airyproc/minor_process.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "airyproc/stats.hpp"

namespace airyproc {
namespace {

TEST(MinorIndex, FloorOfScaledTime) {
  EXPECT_EQ(minor_index(0.0, 1000), 0u);
  EXPECT_EQ(minor_index(0.3, 1000), 3u);  // 0.3 * 10, despite 0.1 * 3 rounding
  EXPECT_EQ(minor_index(3 * 0.1, 1000), 3u);
  EXPECT_EQ(minor_index(0.25, 1000), 2u);
  EXPECT_THROW(minor_index(-0.1, 1000), std::invalid_argument);
}

TEST(ComputeTrajectory, FramesWithEqualMinorAreIdentical) {
  const BetaEnsembleSpec spec{1000, 2.0};
  RngStream s(50, 0);
  // dt = 0.04 < n^{-1/3} = 0.1, so neighbouring frames often share a minor.
  const auto traj = compute_trajectory(spec, s, 3, 1.0, 0.04);
  ASSERT_EQ(traj.frames.size(), 26u);
  std::size_t shared = 0;
  for (std::size_t f = 1; f < traj.frames.size(); ++f) {
    const auto& a = traj.frames[f - 1];
    const auto& b = traj.frames[f];
    EXPECT_LE(a.t, b.t);
    if (a.removed == b.removed) {
      ++shared;
      EXPECT_EQ(a.scaled_eigs, b.scaled_eigs);
      EXPECT_EQ(a.derivative_est, b.derivative_est);
    }
  }
  EXPECT_GT(shared, 10u);
}

TEST(ComputeTrajectory, MonotoneStepProcess) {
  const BetaEnsembleSpec spec{3000, 1.0};
  for (std::uint64_t r = 0; r < 5; ++r) {
    RngStream s(51, r);
    const auto traj = compute_trajectory(spec, s, 5, 2.0, 0.01);
    for (std::size_t f = 1; f < traj.frames.size(); ++f) {
      for (std::size_t i = 0; i < 5; ++i) {
        // Eigenvalues can only grow when rows are deleted; allow bisection slack.
        EXPECT_GE(traj.frames[f].scaled_eigs[i], traj.frames[f - 1].scaled_eigs[i] - 1e-6);
      }
      for (std::size_t i = 0; i + 1 < 5; ++i) {
        EXPECT_LT(traj.frames[f].scaled_eigs[i], traj.frames[f].scaled_eigs[i + 1]);
      }
    }
  }
}

TEST(ComputeTrajectory, ReplayIsBitExactAndFieldsAreConsistent) {
  const BetaEnsembleSpec spec{2000, 4.0};
  RngStream a(52, 3);
  RngStream b(52, 3);
  const auto t1 = compute_trajectory(spec, a, 4, 1.5, 0.05);
  const auto t2 = compute_trajectory(spec, b, 4, 1.5, 0.05);
  ASSERT_EQ(t1.frames.size(), t2.frames.size());
  for (std::size_t f = 0; f < t1.frames.size(); ++f) {
    const auto& x = t1.frames[f];
    EXPECT_EQ(x.scaled_eigs, t2.frames[f].scaled_eigs);
    EXPECT_EQ(x.spectral_weights, t2.frames[f].spectral_weights);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(x.recentered[i], x.scaled_eigs[i] - x.t);
      EXPECT_EQ(x.derivative_est[i], 2000.0 * x.spectral_weights[i]);
      EXPECT_GT(x.spectral_weights[i], 0.0);
      EXPECT_LT(x.spectral_weights[i], 1.0);
    }
  }
  EXPECT_EQ(t1.seed.master_seed, 52u);
  EXPECT_EQ(t1.seed.stream_index, 3u);
}

TEST(ComputeTrajectory, RejectsGridThatExhaustsMatrix) {
  const BetaEnsembleSpec spec{100, 2.0};
  RngStream s(53, 0);
  // 100^{1/3} ~ 4.64: t_max = 25 needs 116 rows.
  EXPECT_THROW(compute_trajectory(spec, s, 2, 25.0, 0.1), std::invalid_argument);
  EXPECT_THROW(compute_trajectory(spec, s, 2, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(compute_trajectory(spec, s, 0, 1.0, 0.1), std::invalid_argument);
}

TEST(SpectralWeights, FullMatrixWeightsSumToOne) {
  const BetaEnsembleSpec spec{30, 2.0};
  RngStream s(54, 0);
  const auto draw = sample_hermite(spec, s);
  const auto pairs = lowest_pairs(edge_minor_matrix(draw, 0), 30, 1e-13);
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.first_entry * p.first_entry;
  EXPECT_NEAR(sum, 1.0, 1e-10);
}

class SpectralWeightLaw : public ::testing::TestWithParam<double> {};

TEST_P(SpectralWeightLaw, ExactDirichletMoments) {
  // n q_1 is exactly n times a Beta(beta/2, (n-1) beta/2) marginal.
  const double beta = GetParam();
  const BetaEnsembleSpec spec{400, beta};
  const auto samples = spectral_weight_samples(spec, 55, 3, 3000);
  const double n = 400.0;
  const double var = 2.0 * (n - 1.0) / (beta * n + 2.0);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> col;
    for (const auto& row : samples) col.push_back(row[i]);
    const auto m = moments(col);
    EXPECT_NEAR(m.mean, 1.0, 3 * m.se_mean) << "i=" << i;
    EXPECT_NEAR(m.variance, var, 3 * m.se_variance) << "i=" << i;
    const double a = beta / 2.0;
    const double b = (n - 1.0) * beta / 2.0;
    const auto ks = ks_one_sample(col, [&](double v) { return beta_cdf(v / n, a, b); });
    EXPECT_TRUE(ks.passed) << ks.statistic;
  }
}

INSTANTIATE_TEST_SUITE_P(Betas, SpectralWeightLaw, ::testing::Values(1.0, 2.0, 4.0));

TEST(Window, TruncatedSolvesAgreeWithFullMatrix) {
  const BetaEnsembleSpec spec{20000, 2.0};
  const double tol = 1e-9;
  MinorOptions full;
  full.tol = tol;
  MinorOptions windowed = full;
  windowed.window = 30.0;
  for (std::uint64_t r = 0; r < 3; ++r) {
    RngStream a(56, r);
    RngStream b(56, r);
    const auto tf = compute_trajectory(spec, a, 3, 2.0, 0.25, full);
    const auto tw = compute_trajectory(spec, b, 3, 2.0, 0.25, windowed);
    EXPECT_EQ(tf.rows_used, 20000u);
    EXPECT_LT(tw.rows_used, 1000u);
    for (std::size_t f = 0; f < tf.frames.size(); ++f) {
      for (std::size_t i = 0; i < 3; ++i) {
        // Both solves bracket to tol; the eigenvalue difference is scaled by n^{1/6}.
        EXPECT_NEAR(tf.frames[f].scaled_eigs[i], tw.frames[f].scaled_eigs[i],
                    2.0 * tol * edge_scale(spec.n));
        EXPECT_NEAR(tf.frames[f].derivative_est[i], tw.frames[f].derivative_est[i], 1e-6);
      }
    }
  }
}

TEST(TrajectoryReplicas, IndependentOfThreadCount) {
  const BetaEnsembleSpec spec{5000, 2.0};
  MinorOptions one;
  one.window = 30.0;
  MinorOptions three = one;
  three.threads = 3;
  const auto a = trajectory_replicas(spec, 57, 12, 2, 1.0, 0.1, one);
  const auto b = trajectory_replicas(spec, 57, 12, 2, 1.0, 0.1, three);
  for (std::size_t r = 0; r < 12; ++r) {
    ASSERT_EQ(a[r].frames.size(), b[r].frames.size());
    for (std::size_t f = 0; f < a[r].frames.size(); ++f) {
      EXPECT_EQ(a[r].frames[f].scaled_eigs, b[r].frames[f].scaled_eigs);
    }
  }
}

TEST(FiniteDifferences, PositiveWithUnitMean) {
  const BetaEnsembleSpec spec{6000, 2.0};
  MinorOptions opts;
  opts.window = 30.0;
  const auto reps = trajectory_replicas(spec, 58, 300, 2, 2.0, 0.01, opts);
  std::vector<double> all;
  for (const auto& traj : reps) {
    const auto fd = derivative_by_finite_difference(traj, 0);
    EXPECT_EQ(fd.quotient.size(), minor_index(2.0, spec.n));
    for (double q : fd.quotient) {
      EXPECT_GE(q, 0.0);
      all.push_back(q);
    }
  }
  EXPECT_NEAR(moments(all).mean, 1.0, 0.05);
  EXPECT_THROW(derivative_by_finite_difference(reps[0], 2), std::invalid_argument);
}

TEST(Stationarity, NoDriftInRecenteredLowestEigenvalue) {
  const BetaEnsembleSpec spec{6000, 2.0};
  MinorOptions opts;
  opts.window = 30.0;
  const auto reps = trajectory_replicas(spec, 59, 200, 1, 2.0, 0.05, opts);
  const std::size_t frames = reps[0].frames.size();
  std::vector<double> t(frames);
  std::vector<double> mean(frames, 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    t[f] = reps[0].frames[f].t;
    for (const auto& traj : reps) mean[f] += traj.frames[f].recentered[0] / 200.0;
  }
  EXPECT_NEAR(least_squares_slope(t, mean), 0.0, 0.1);
}

TEST(LinearityProfile, VanishesAtZeroAndIsBounded) {
  const BetaEnsembleSpec spec{20000, 2.0};
  MinorOptions opts;
  opts.window = 30.0;
  RngStream s(60, 0);
  const auto prof = eigvec_linearity_profile(spec, s, 0, 0.5, opts);
  ASSERT_EQ(prof.x.size(), minor_index(0.5, spec.n) + 1);
  EXPECT_EQ(prof.x[0], 0.0);
  EXPECT_EQ(prof.deviation[0], 0.0);
  EXPECT_EQ(prof.deviation[1], 0.0);  // v_1 - 1 * v_1
  EXPECT_GT(prof.first_entry, 0.0);
  EXPECT_TRUE(std::isfinite(prof.scaled_bound()));
  EXPECT_GE(prof.scaled_bound(), 0.0);
}

TEST(ReversibilityAsymmetry, GammaSamplesArePositivelySkewed) {
  RngStream s(61, 0);
  std::vector<double> q(5000);
  for (auto& v : q) v = sample_gamma(s, {1.0, 1.0});
  RngStream boot(61, 1);
  const auto r = reversibility_asymmetry(q, boot);
  EXPECT_TRUE(r.positive);
  EXPECT_NEAR(r.skewness, 2.0, 0.3);
  EXPECT_EQ(r.n_samples, 5000u);
  std::vector<double> few(999, 1.0);
  EXPECT_THROW(reversibility_asymmetry(few, boot), std::invalid_argument);
}

}  // namespace
}  // namespace airyproc
