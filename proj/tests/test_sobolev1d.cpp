#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "randinfo/rate_fit.hpp"
#include "randinfo/sobolev1d.hpp"

using namespace randinfo;

TEST(Sobolev1D, EqualExponentsGiveMaxGap) {
  const SortedPointSet1D p({0.5});
  for (double pq : {1.0, 2.0, 7.5, kInf}) {
    const RadiusEstimate r = radius_surrogate_1d(p, {pq, pq});
    EXPECT_DOUBLE_EQ(r.value, 0.5);
    EXPECT_EQ(r.kind, RadiusEstimate::Kind::surrogate);
    EXPECT_FALSE(r.std_error.has_value());
  }
}

TEST(Sobolev1D, MidpointsPGreaterQ) {
  // gaps 1/8, 1/4, 1/4, 1/4, 1/8; exponent (pq+p-q)/(p-q) = 3, outer power 1/2
  const double oracle = std::sqrt(2.0 * std::pow(0.125, 3) + 3.0 * std::pow(0.25, 3));
  EXPECT_NEAR(radius_surrogate_1d(optimal_nodes_1d(4), {2.0, 1.0}).value, oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.22535, 1e-5);
  EXPECT_DOUBLE_EQ(integration_radius(optimal_nodes_1d(4), 2.0).value,
                   radius_surrogate_1d(optimal_nodes_1d(4), {2.0, 1.0}).value);
}

TEST(Sobolev1D, InfiniteP) {
  // p = inf, q = 1: s = 1, sum of squared gaps
  const SortedPointSet1D p({0.25, 0.5});
  EXPECT_NEAR(radius_surrogate_1d(p, {kInf, 1.0}).value, 0.0625 + 0.0625 + 0.25, 1e-15);
  // p = inf, q = 2: s = 2, (sum l^3)^(1/2)
  EXPECT_NEAR(radius_surrogate_1d(p, {kInf, 2.0}).value, std::sqrt(2.0 / 64.0 + 0.125), 1e-15);
}

TEST(Sobolev1D, DegenerateExponent) {
  const RadiusEstimate r = radius_surrogate_1d(SortedPointSet1D({0.3}), {1.0, kInf});
  EXPECT_EQ(r.value, 1.0);
  EXPECT_TRUE(r.degenerate);
  const RadiusEstimate mc = expected_radius_mc_1d(5, {1.0, kInf}, 100, RngStream(1, 0));
  EXPECT_TRUE(mc.degenerate);
  EXPECT_FALSE(radius_surrogate_1d(SortedPointSet1D({0.3}), {2.0, kInf}).degenerate);
}

TEST(Sobolev1D, MaxGapBranchMatchesCorePrimitive) {
  RngStream s(3, 3);
  for (int t = 0; t < 50; ++t) {
    const auto p = sample_uniform_sorted(20, s);
    const double e = 1.0 - 1.0 / 2.0 + 1.0 / 3.0;
    EXPECT_DOUBLE_EQ(radius_surrogate_1d(p, {2.0, 3.0}).value, std::pow(max_gap(spacings(p)), e));
  }
}

TEST(Sobolev1D, OptimalNodes) {
  const SortedPointSet1D p1 = optimal_nodes_1d(1), p4 = optimal_nodes_1d(4);
  const auto one = p1.points();
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0], 0.5);
  const auto four = p4.points();
  const std::vector<double> want{0.125, 0.375, 0.625, 0.875};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(four[i], want[i]);
  EXPECT_THROW(optimal_nodes_1d(0), InvalidArgument);
}

TEST(Sobolev1D, InsertionNeverIncreases) {
  RngStream s(8, 1);
  const std::vector<SobolevParams1D> params{{2.0, 1.0}, {kInf, 1.0}, {1.0, 1.0}, {2.0, 2.0}, {3.0, kInf}, {4.0, 1.5}};
  for (int t = 0; t < 200; ++t) {
    const auto p = sample_uniform_sorted(1 + t % 15, s);
    const auto q = p.with_point(s.uniform());
    for (const auto& pr : params)
      EXPECT_LE(radius_surrogate_1d(q, pr).value, radius_surrogate_1d(p, pr).value * (1.0 + 1e-14));
  }
}

TEST(Sobolev1D, PermutationInvariance) {
  // same multiset of gaps in a different order
  const SortedPointSet1D a({0.1, 0.4, 0.5});    // 0.1 0.3 0.1 0.5
  const SortedPointSet1D b({0.5, 0.6, 0.9});    // 0.5 0.1 0.3 0.1
  EXPECT_NEAR(radius_surrogate_1d(a, {3.0, 1.0}).value, radius_surrogate_1d(b, {3.0, 1.0}).value, 1e-15);
}

// Every n-point set has a gap >= 1/(n+1) while midpoints have max gap 1/n,
// so midpoints are optimal for the max-gap functional up to ((n+1)/n)^e.
TEST(Sobolev1D, MidpointsNearlyBeatRandomSets) {
  RngStream s(12, 0);
  const std::vector<SobolevParams1D> params{{1.0, 1.0}, {2.0, 2.0}, {2.0, kInf}};
  for (std::size_t n : {1u, 3u, 10u, 40u}) {
    const SortedPointSet1D mid = optimal_nodes_1d(n);
    for (int t = 0; t < 1000; ++t) {
      const auto p = sample_uniform_sorted(n, s);
      for (const auto& pr : params) {
        const double slack = std::pow((n + 1.0) / n, max_gap_exponent(pr));
        ASSERT_LE(radius_surrogate_1d(mid, pr).value, slack * radius_surrogate_1d(p, pr).value * (1.0 + 1e-14));
      }
    }
  }
}

TEST(Sobolev1D, EquispacedInteriorSetBeatsMidpoints) {
  // i/(n+1) attains the lower bound 1/(n+1) for the max gap
  const std::size_t n = 3;
  const SortedPointSet1D p({0.25, 0.5, 0.75});
  EXPECT_LT(radius_surrogate_1d(p, {2.0, 2.0}).value, radius_surrogate_1d(optimal_nodes_1d(n), {2.0, 2.0}).value);
}

TEST(Sobolev1D, SinglePointExpectation) {
  const RadiusEstimate r = expected_radius_mc_1d(1, {2.0, 2.0}, 20000, RngStream(77, 0));
  EXPECT_EQ(r.kind, RadiusEstimate::Kind::monte_carlo);
  ASSERT_TRUE(r.std_error.has_value());
  EXPECT_LE(std::abs(r.value - 0.75), 3.0 * *r.std_error);
}

TEST(Sobolev1D, ExpectationIsDeterministic) {
  const auto a = expected_radius_mc_1d(30, {2.0, 1.0}, 500, RngStream(5, 9), 1);
  const auto b = expected_radius_mc_1d(30, {2.0, 1.0}, 500, RngStream(5, 9), 3);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(*a.std_error, *b.std_error);
  EXPECT_THROW(expected_radius_mc_1d(30, {2.0, 1.0}, 99, RngStream(5, 9)), InvalidArgument);
}

TEST(Sobolev1D, SpacingNormBoundedTimesN) {
  // E[(sum l^(s+1))^(1/s)] * n stays in a bounded window
  for (double s : {1.0, 2.0}) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t n = 16; n <= 4096; n *= 4) {
      const auto v = run_trials(400, [&](std::size_t t) {
        RngStream st = trial_stream(RngStream(31, static_cast<std::uint64_t>(s)), n * 1000 + t);
        return spacing_norm(spacings(sample_uniform_sorted(n, st)), s) * static_cast<double>(n);
      });
      const double m = summarize(v).mean;
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    EXPECT_LT(hi / lo, 1.5) << "s=" << s;
  }
}

TEST(RateFit, ExactPowerLaws) {
  const std::vector<double> n{16, 64, 256, 1024, 4096};
  std::vector<double> y1, y2;
  for (double x : n) {
    y1.push_back(1.0 / x);
    y2.push_back(3.0 / std::sqrt(x));
  }
  const RateFit a = fit_rate(n, y1);
  EXPECT_NEAR(a.slope, -1.0, 1e-12);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  const RateFit b = fit_rate(n, y2);
  EXPECT_NEAR(b.slope, -0.5, 1e-12);
  EXPECT_NEAR(b.intercept, std::log(3.0), 1e-12);

  std::vector<double> y3;
  for (double x : n) y3.push_back(std::log(x) / x);
  EXPECT_NEAR(fit_rate(n, y3, XTransform::log_n_over_log_n).slope, -1.0, 1e-12);
}

TEST(RateFit, RejectsBadInput) {
  const std::vector<double> n{1, 2, 3, 4};
  EXPECT_THROW(fit_rate(n, std::vector<double>{1, 2, 0, 4}), InvalidArgument);
  EXPECT_THROW(fit_rate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(TheoryRate, BranchesOnExponents) {
  EXPECT_DOUBLE_EQ(theory_rate_1d(100.0, {2.0, 1.0}), 0.01);
  EXPECT_DOUBLE_EQ(theory_rate_1d(100.0, {kInf, 1.0}), 0.01);
  // p = q: exponent 1
  EXPECT_NEAR(theory_rate_1d(100.0, {2.0, 2.0}), std::log(100.0) / 100.0, 1e-15);
  // p = 1, q = 2: exponent 1/2
  EXPECT_NEAR(theory_rate_1d(64.0, {1.0, 2.0}), std::sqrt(std::log(64.0) / 64.0), 1e-15);
  EXPECT_THROW(theory_rate_1d(1.0, {2.0, 2.0}), InvalidArgument);
}
