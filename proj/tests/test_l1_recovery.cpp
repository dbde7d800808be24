#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "randinfo/l1_recovery.hpp"

using namespace randinfo;

namespace {

// Independent route for r(G, 0): the section {c : ||B c||_1 <= 1} in
// kernel coordinates is cut out by the 2^m inequalities <s, B c> <= 1.
// Vertices solve k of them with equality.
double section_vertex_oracle(const Eigen::MatrixXd& G) {
  const Eigen::MatrixXd B = kernel_basis(G);
  const int m = static_cast<int>(B.rows()), k = static_cast<int>(B.cols());
  const int F = 1 << m;
  Eigen::MatrixXd rows(F, k);
  for (int f = 0; f < F; ++f) {
    Eigen::VectorXd s(m);
    for (int i = 0; i < m; ++i) s[i] = (f >> i & 1) ? 1.0 : -1.0;
    rows.row(f) = (B.transpose() * s).transpose();
  }
  std::vector<int> S(k);
  std::iota(S.begin(), S.end(), 0);
  double best = 0.0;
  for (;;) {
    Eigen::MatrixXd M(k, k);
    for (int i = 0; i < k; ++i) M.row(i) = rows.row(S[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.isInvertible()) {
      const Eigen::VectorXd c = lu.solve(Eigen::VectorXd::Ones(k));
      if ((B * c).lpNorm<1>() <= 1.0 + 1e-9) best = std::max(best, c.norm());
    }
    int i = k;
    while (i > 0 && S[i - 1] == F - k + i - 1) --i;
    if (i == 0) break;
    ++S[i - 1];
    for (int j = i; j < k; ++j) S[j] = S[j - 1] + 1;
  }
  return best;
}

}  // namespace

TEST(GaussianInfo, Reproducible) {
  RngStream a(4, 2), b(4, 2);
  EXPECT_EQ(gaussian_info(3, 7, a), gaussian_info(3, 7, b));
  EXPECT_THROW(gaussian_info(0, 3, a), InvalidArgument);
}

TEST(GaussianInfo, ColumnMeansNearZero) {
  RngStream s(9, 0);
  const InfoMatrix G = gaussian_info(3, 100000, s);
  const double se = 1.0 / std::sqrt(100000.0);
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    EXPECT_LE(std::abs(G.row(i).mean()), 3.0 * se);
    EXPECT_NEAR((G.row(i).array().square().mean()), 1.0, 0.02);
  }
}

TEST(GaussianInfo, SquareIsInvertible) {
  RngStream s(10, 0);
  for (int t = 0; t < 1000; ++t) {
    const InfoMatrix G = gaussian_info(6, 6, s);
    EXPECT_GT(Eigen::JacobiSVD<Eigen::MatrixXd>(G).singularValues().minCoeff(), 0.0);
  }
}

TEST(BasisPursuit, ZeroData) {
  RngStream s(1, 1);
  const InfoMatrix G = gaussian_info(3, 6, s);
  const BPSolution bp = basis_pursuit(G, Eigen::VectorXd::Zero(3));
  EXPECT_TRUE(bp.x.isZero(0.0));
  EXPECT_EQ(bp.opt_gap_bound, 0.0);
}

TEST(BasisPursuit, SquareSystemIsUniquelySolved) {
  RngStream s(1, 2);
  for (int t = 0; t < 50; ++t) {
    const InfoMatrix G = gaussian_info(5, 5, s);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) y[i] = s.normal();
    const BPSolution bp = basis_pursuit(G, y);
    EXPECT_LE((bp.x - G.partialPivLu().solve(y)).norm(), 1e-9);
  }
}

// Recovery of a 1-sparse vector at m=8, n=5 is likely but not certain:
// for some draws another feasible point has smaller l1 norm. The decoder
// must agree with the oracle either way.
TEST(BasisPursuit, RecoversOneSparseAndMatchesOracle) {
  RngStream s(1, 3);
  int recovered = 0;
  for (int t = 0; t < 200; ++t) {
    const InfoMatrix G = gaussian_info(5, 8, s);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(8);
    x0[static_cast<Eigen::Index>(s.uniform_index(8))] = s.uniform() < 0.5 ? -1.0 : 1.0;
    const Eigen::VectorXd y = G * x0;
    const BPSolution bp = basis_pursuit(G, y);
    const Eigen::VectorXd want = oracles::lp_vertex_oracle(G, y);
    ASSERT_LE((bp.x - want).norm(), 1e-6);
    if ((want - x0).norm() <= 1e-9) EXPECT_LE((bp.x - x0).norm(), 1e-6);
    recovered += (bp.x - x0).norm() <= 1e-6 ? 1 : 0;
  }
  EXPECT_GE(recovered, 180);
}

TEST(BasisPursuit, MatchesOracleOnDenseData) {
  RngStream s(1, 4);
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + static_cast<int>(s.uniform_index(7));
    const int n = 1 + static_cast<int>(s.uniform_index(static_cast<std::uint64_t>(m)));
    const InfoMatrix G = gaussian_info(n, m, s);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = s.normal();
    const BPSolution bp = basis_pursuit(G, y);
    const Eigen::VectorXd want = oracles::lp_vertex_oracle(G, y);
    ASSERT_LE((bp.x - want).norm(), 1e-6) << "m=" << m << " n=" << n;
    // certificate
    EXPECT_LE((G.transpose() * bp.lambda).cwiseAbs().maxCoeff(), 1.0 + 1e-8);
    EXPECT_GE(y.dot(bp.lambda), bp.x.lpNorm<1>() - 1e-6 * bp.x.lpNorm<1>());
    EXPECT_LE(bp.feas_residual, 1e-10 * y.norm() + 1e-12);
  }
}

TEST(RadiusZero, TrivialCases) {
  EXPECT_EQ(radius_zero_exact(InfoMatrix(0, 5)), 1.0);
  RngStream s(2, 0);
  EXPECT_EQ(radius_zero_lower(InfoMatrix(0, 5), 3, s), 1.0);
  const InfoMatrix G = gaussian_info(4, 4, s);
  EXPECT_EQ(radius_zero_exact(G), 0.0);
  EXPECT_EQ(radius_zero_lower(G, 3, s), 0.0);
}

TEST(RadiusZero, AllOnesRow) {
  InfoMatrix G(1, 3);
  G << 1, 1, 1;
  EXPECT_NEAR(radius_zero_exact(G), 1.0 / std::sqrt(2.0), 1e-14);
  RngStream s(2, 1);
  EXPECT_NEAR(radius_zero_lower(G, 5, s), 1.0 / std::sqrt(2.0), 1e-14);
  // dense sampling of the kernel circle
  const Eigen::MatrixXd B = kernel_basis(G);
  double best = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double th = 2.0 * std::numbers::pi * i / 200000.0;
    const Eigen::VectorXd x = B.col(0) * std::cos(th) + B.col(1) * std::sin(th);
    best = std::max(best, x.norm() / x.lpNorm<1>());
  }
  EXPECT_NEAR(best, 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(RadiusZero, MatchesSectionVertexOracle) {
  RngStream s(2, 2);
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + static_cast<int>(s.uniform_index(5));
    const int lo = std::max(1, m - 3);  // kernel dimension <= 3 keeps the oracle cheap
    const int n = lo + static_cast<int>(s.uniform_index(static_cast<std::uint64_t>(m - lo)));
    const InfoMatrix G = gaussian_info(n, m, s);
    ASSERT_NEAR(radius_zero_exact(G), section_vertex_oracle(G), 1e-10) << "m=" << m << " n=" << n;
  }
}

TEST(RadiusZero, RankDeficientAndSparseKernels) {
  InfoMatrix G(3, 4);
  G << 1, 1, 0, 0,
       0, 0, 1, 0,
       2, 2, 1, 0;  // rank 2, kernel spanned by (1,-1,0,0) and e_4
  EXPECT_NEAR(radius_zero_exact(G), 1.0, 1e-14);
  RngStream s(2, 3);
  EXPECT_NEAR(radius_zero_lower(G, 4, s), 1.0, 1e-12);
  EXPECT_THROW(kernel_basis(G), InvalidArgument);
}

TEST(RadiusZero, LowerAgreesWithExact) {
  RngStream s(2, 4);
  for (int t = 0; t < 30; ++t) {
    const int m = 3 + static_cast<int>(s.uniform_index(10));
    const int n = 1 + static_cast<int>(s.uniform_index(static_cast<std::uint64_t>(m - 1)));
    const InfoMatrix G = gaussian_info(n, m, s);
    const double ex = radius_zero_exact(G);
    const double lo = radius_zero_lower(G, 100, s);
    EXPECT_LE(lo, ex + 1e-9);
    EXPECT_GE(lo, ex - 1e-6) << "m=" << m << " n=" << n;
  }
}

TEST(RadiusZero, MonotoneInRows) {
  RngStream s(2, 5);
  for (int t = 0; t < 20; ++t) {
    const InfoMatrix G = gaussian_info(9, 10, s);
    double prev = 1.0;
    for (int n = 0; n <= 9; ++n) {
      const double v = radius_zero_exact(G.topRows(n));
      EXPECT_LE(v, prev + 1e-12);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
  }
}

TEST(RadiusZero, GuardTrips) {
  RngStream s(2, 6);
  const InfoMatrix G = gaussian_info(20, 40, s);
  EXPECT_THROW(radius_zero_exact(G), ResourceGuard);
  const double lo = radius_zero_lower(G, 2, s);
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(lo, 1.0);
}

TEST(Kgg, ExactRatioForCodimensionOne) {
  const std::vector<std::size_t> grid{7};
  const auto rows = kgg_rate_check(8, grid, 20, 10, RngStream(5, 0), 1);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].exact_mean.has_value());
  EXPECT_NEAR(rows[0].reference, std::sqrt(std::log(1.0 + 8.0 / 7.0) / 7.0), 1e-15);
  EXPECT_NEAR(*rows[0].exact_ratio, *rows[0].exact_mean / rows[0].reference, 1e-15);
  EXPECT_LE(rows[0].mean_lower, *rows[0].exact_mean + 1e-9);
  EXPECT_LE(*rows[0].exact_mean, 1.0);
}

TEST(Kgg, Deterministic) {
  const std::vector<std::size_t> grid{4, 8};
  const auto a = kgg_rate_check(16, grid, 6, 3, RngStream(5, 1), 1);
  const auto b = kgg_rate_check(16, grid, 6, 3, RngStream(5, 1), 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean_lower, b[i].mean_lower);
    EXPECT_EQ(a[i].std_error, b[i].std_error);
  }
}

TEST(SparseRecovery, TrivialCases) {
  EXPECT_EQ(sparse_recovery_experiment(64, 10, 0, 20, RngStream(6, 0)).rate, 1.0);
  EXPECT_EQ(sparse_recovery_experiment(64, 64, 7, 20, RngStream(6, 1)).rate, 1.0);
  EXPECT_THROW(sparse_recovery_experiment(8, 4, 9, 20, RngStream(6, 1)), InvalidArgument);
}

TEST(SparseRecovery, OneSparseAtSixteen) {
  const SuccessRate r = sparse_recovery_experiment(16, 10, 1, 1000, RngStream(6, 2));
  EXPECT_GE(r.rate, 0.99);
}

TEST(SparseRecovery, MonotoneInMeasurements) {
  double prev = -1.0, prev_se = 0.0;
  for (std::size_t n : {4u, 8u, 12u, 16u, 24u}) {
    const SuccessRate r = sparse_recovery_experiment(64, n, 2, 400, RngStream(6, 3 + n));
    EXPECT_GE(r.rate, prev - 3.0 * std::hypot(r.std_error, prev_se)) << "n=" << n;
    prev = r.rate;
    prev_se = r.std_error;
  }
}
