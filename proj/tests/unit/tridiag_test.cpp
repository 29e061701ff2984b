#include "airyproc/tridiag.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "airyproc/random.hpp"
#include "oracles.hpp"

namespace airyproc {
namespace {

TridiagSym laplacian(std::size_t m) {
  return TridiagSym(std::vector<double>(m, 2.0), std::vector<double>(m - 1, -1.0));
}

TridiagSym random_tridiag(RngStream& s, std::size_t m) {
  std::vector<double> d(m);
  std::vector<double> e(m - 1);
  for (auto& v : d) v = 4.0 * s.uniform() - 2.0;
  for (auto& v : e) v = 4.0 * s.uniform() - 2.0;
  return TridiagSym(d, e);
}

double laplacian_eig(std::size_t j, std::size_t m) {
  return 2.0 - 2.0 * std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(m + 1));
}

TEST(TridiagSym, RejectsBadShapes) {
  EXPECT_THROW(TridiagSym({}, {}), std::invalid_argument);
  EXPECT_THROW(TridiagSym({1.0, 2.0}, {}), std::invalid_argument);
  EXPECT_THROW(TridiagSym({1.0, NAN}, {0.5}), std::invalid_argument);
  EXPECT_NO_THROW(TridiagSym({1.0}, {}));
}

TEST(SturmCount, TwoByTwoExamples) {
  const TridiagSym t({2.0, 2.0}, {-1.0});
  EXPECT_EQ(sturm_count(t, 0.0), 0u);
  EXPECT_EQ(sturm_count(t, 2.0), 1u);
  EXPECT_EQ(sturm_count(t, 10.0), 2u);
  // Strictly-less semantics at an eigenvalue.
  EXPECT_EQ(sturm_count(t, 1.0), 0u);
}

TEST(SturmCount, MonotoneWithFullJumpOverGershgorinInterval) {
  RngStream s(20, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = 2 + static_cast<std::size_t>(s.uniform() * 40);
    const auto t = random_tridiag(s, m);
    const double lo = t.gershgorin_lower() - 1.0;
    const double hi = t.gershgorin_upper() + 1.0;
    EXPECT_EQ(sturm_count(t, lo), 0u);
    EXPECT_EQ(sturm_count(t, hi), m);
    std::size_t prev = 0;
    for (int i = 0; i <= 400; ++i) {
      const std::size_t c = sturm_count(t, lo + (hi - lo) * i / 400.0);
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(SturmCount, SurvivesZeroPivots) {
  // Exact zero pivot at x = 0 for the first row.
  const TridiagSym t({0.0, 0.0, 0.0}, {1.0, 1.0});
  // Eigenvalues -sqrt2, 0, sqrt2.
  EXPECT_EQ(sturm_count(t, 0.0), 1u);
  EXPECT_EQ(sturm_count(t, 1e-9), 2u);
}

TEST(LowestEigenvalues, TwoByTwo) {
  const TridiagSym t({2.0, 2.0}, {-1.0});
  const auto ev = lowest_eigenvalues(t, 2, 1e-12);
  EXPECT_NEAR(ev[0], 1.0, 1e-12);
  EXPECT_NEAR(ev[1], 3.0, 1e-12);
}

TEST(LowestEigenvalues, LaplacianClosedForm) {
  for (std::size_t m : {10u, 100u}) {
    const auto t = laplacian(m);
    const auto ev = lowest_eigenvalues(t, 3, 1e-12);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(ev[j], laplacian_eig(j + 1, m), 1e-10) << m;
  }
}

TEST(LowestEigenvalues, MatchesDenseOracleOnSmallMatrices) {
  RngStream s(21, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(s.uniform() * 8);
    const auto t = random_tridiag(s, m);
    const auto dense = oracle::jacobi_eigenvalues(oracle::dense_from_tridiagonal(t.diag(), t.offdiag()));
    const std::size_t k = 1 + static_cast<std::size_t>(s.uniform() * m);
    const auto ev = lowest_eigenvalues(t, k, 1e-12);
    ASSERT_EQ(ev.size(), k);
    for (std::size_t i = 0; i < k; ++i) ASSERT_NEAR(ev[i], dense[i], 1e-10) << "rep " << rep;
  }
}

TEST(LowestEigenvalues, RejectsBadArguments) {
  const auto t = laplacian(4);
  EXPECT_THROW(lowest_eigenvalues(t, 5, 1e-10), std::invalid_argument);
  EXPECT_THROW(lowest_eigenvalues(t, 0, 1e-10), std::invalid_argument);
  EXPECT_THROW(lowest_eigenvalues(t, 2, 0.0), std::invalid_argument);
}

TEST(LowestEigenvalues, FlagsDegenerateClusters) {
  // Two decoupled identical blocks give exactly repeated eigenvalues.
  const TridiagSym t({2.0, 2.0, 2.0, 2.0}, {-1.0, 0.0, -1.0});
  const auto br = bracket_lowest(t, 2, 1e-10);
  EXPECT_NEAR(br.values[0], 1.0, 1e-10);
  EXPECT_NEAR(br.values[1], 1.0, 1e-10);
  EXPECT_TRUE(br.near_degenerate[0]);
  EXPECT_TRUE(br.near_degenerate[1]);
  const auto pairs = lowest_pairs(t, 2, 1e-10);
  double dot = 0.0;
  for (std::size_t i = 0; i < 4; ++i) dot += pairs[0].eigenvector[i] * pairs[1].eigenvector[i];
  EXPECT_LT(std::abs(dot), 1e-8);
}

TEST(Interlacing, PrincipalSubmatrixOnRandomInstances) {
  RngStream s(22, 0);
  const double tol = 1e-11;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t m = 3 + static_cast<std::size_t>(s.uniform() * 60);
    const auto t = random_tridiag(s, m);
    const auto sub = t.principal(1, m);
    const std::size_t k = std::min<std::size_t>(5, m - 2);
    const auto a = lowest_eigenvalues(t, k + 1, tol);
    const auto b = lowest_eigenvalues(sub, k, tol);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_GE(b[i], a[i] - 2 * tol);
      EXPECT_LE(b[i], a[i + 1] + 2 * tol);
    }
  }
}

TEST(EigenvectorFor, TwoByTwo) {
  const TridiagSym t({2.0, 2.0}, {-1.0});
  const auto p = eigenvector_for(t, 1.0, 1e-12);
  EXPECT_NEAR(p.eigenvector[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(p.eigenvector[1], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(p.first_entry, p.eigenvector[0]);
}

TEST(EigenvectorFor, LaplacianSineMode) {
  const std::size_t m = 10;
  const auto t = laplacian(m);
  const auto lam = lowest_eigenvalues(t, 1, 1e-13)[0];
  const auto p = eigenvector_for(t, lam, 1e-13);
  std::vector<double> exact(m);
  double norm = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    exact[j] = std::sin(static_cast<double>(j + 1) * std::numbers::pi / 11.0);
    norm += exact[j] * exact[j];
  }
  for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(p.eigenvector[j], exact[j] / std::sqrt(norm), 1e-8);
}

TEST(LowestPairs, ResidualNormSignAndOrthogonality) {
  RngStream s(23, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 3 + static_cast<std::size_t>(s.uniform() * 6);
    const auto t = random_tridiag(s, m);
    const auto pairs = lowest_pairs(t, 3, 1e-12);
    for (std::size_t a = 0; a < 3; ++a) {
      const auto& v = pairs[a].eigenvector;
      double nrm = 0.0;
      for (double x : v) nrm += x * x;
      EXPECT_NEAR(nrm, 1.0, 1e-12);
      EXPECT_LT(pairs[a].residual, 1e-10);
      const auto first = std::find_if(v.begin(), v.end(), [](double x) { return x != 0.0; });
      ASSERT_NE(first, v.end());
      EXPECT_GT(*first, 0.0);
      // Independent residual check.
      const auto tv = t.apply(v);
      double res = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = tv[i] - pairs[a].eigenvalue * v[i];
        res += r * r;
      }
      EXPECT_LT(std::sqrt(res), 1e-10);
      for (std::size_t b = a + 1; b < 3; ++b) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += v[i] * pairs[b].eigenvector[i];
        EXPECT_LT(std::abs(dot), 1e-8);
      }
    }
  }
}

TEST(LowestPairs, LargeMatrixOrthogonality) {
  RngStream s(24, 0);
  const auto t = random_tridiag(s, 2000);
  const auto pairs = lowest_pairs(t, 6);
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 2000; ++i) dot += pairs[a].eigenvector[i] * pairs[b].eigenvector[i];
      EXPECT_LT(std::abs(dot), 1e-8);
    }
  }
}

TEST(RayleighQuotient, EigenvectorAndLowerBound) {
  const auto t = laplacian(10);
  const auto p = lowest_pairs(t, 1, 1e-13)[0];
  EXPECT_NEAR(rayleigh_quotient(t, p.eigenvector), laplacian_eig(1, 10), 1e-12);
  RngStream s(25, 0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(10);
    for (auto& x : v) x = s.normal();
    EXPECT_GE(rayleigh_quotient(t, v), laplacian_eig(1, 10) - 1e-10);
  }
  EXPECT_THROW(rayleigh_quotient(t, std::vector<double>(10, 0.0)), std::invalid_argument);
}

TEST(TridiagSym, PrincipalAndApply) {
  const TridiagSym t({1.0, 2.0, 3.0, 4.0}, {0.5, 0.6, 0.7});
  const auto sub = t.principal(1, 3);
  EXPECT_EQ(sub.diag(), (std::vector<double>{2.0, 3.0}));
  EXPECT_EQ(sub.offdiag(), (std::vector<double>{0.6}));
  const auto y = t.apply(std::vector<double>{1.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(y, (std::vector<double>{1.0, 0.5, 0.7, 4.0}));
}

}  // namespace
}  // namespace airyproc
