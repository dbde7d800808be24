#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "randinfo/coupon.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/quadrature.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/spacings.hpp"

using namespace randinfo;

namespace {

// Reference words from numpy.random.Philox(key=...). numpy increments the
// counter before each block, so its first block is our block 1.
void expect_matches_reference(std::uint64_t k0, std::uint64_t k1, const std::vector<std::uint64_t>& ref) {
  RngStream s(k0, k1);
  for (int i = 0; i < 4; ++i) s.next_u64();
  for (std::uint64_t want : ref) EXPECT_EQ(s.next_u64(), want);
}

}  // namespace

TEST(Philox, MatchesReferenceZeroKey) {
  expect_matches_reference(0, 0,
                           {0x2f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL,
                            0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL,
                            0xfc6ed66767a457bcULL});
}

TEST(Philox, MatchesReferenceUnitKey) {
  expect_matches_reference(1, 0,
                           {0x4db6a27b756282dfULL, 0xd944fa03babe0e2fULL, 0x27f872e577060d32ULL, 0x7f697696a0482a2ULL,
                            0xe677fe4bbd0452ecULL, 0xd543dba56d1e799ULL, 0xbebe12cad0eb4d9eULL,
                            0x3f0b4abd55f61f3dULL});
}

TEST(Philox, MatchesReferenceMixedKey) {
  expect_matches_reference(0x0123456789abcdefULL, 42,
                           {0x66516e75b3bf9e6eULL, 0x9139ca60866d5353ULL, 0x2476827e52f6179aULL, 0x6e3c07c043576d4dULL,
                            0xab6a06e54aa72f06ULL, 0xde965b23629a4080ULL, 0xa2e0daef738d162dULL,
                            0x2f9a9a7c6ee2cb56ULL});
}

TEST(RngStream, SameKeySameSequence) {
  RngStream a(7, 3), b(7, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(7, 3), b(7, 4), c(8, 3);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream s(1, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // mean 1/2, sd of the mean sqrt(1/12/n)
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngStream, UniformIndexCoversRange) {
  RngStream s(2, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = s.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(s.uniform_index(1), 0u);
}

TEST(RngStream, NormalMoments) {
  RngStream s(3, 0);
  const int n = 200000;
  std::vector<double> x(n);
  s.fill_normal(x);
  const McSummary m = summarize(x);
  EXPECT_NEAR(m.mean, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m.variance, 1.0, 0.02);
}

TEST(RngStream, TrialStreamIsOrderIndependent) {
  const RngStream base(11, 5);
  RngStream t3 = trial_stream(base, 3);
  RngStream again(11, stream_id(5, 3));
  for (int i = 0; i < 16; ++i) EXPECT_EQ(t3.next_u64(), again.next_u64());
}

TEST(MonteCarlo, RunTrialsOrderedAndWorkerIndependent) {
  auto fn = [](std::size_t t) {
    RngStream s = trial_stream(RngStream(99, 0), t);
    return s.uniform();
  };
  const auto one = run_trials(1000, fn, 1);
  const auto many = run_trials(1000, fn, 4);
  ASSERT_EQ(one.size(), 1000u);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i], many[i]);
}

TEST(MonteCarlo, RunTrialsPropagatesExceptions) {
  EXPECT_THROW(run_trials(
                   100,
                   [](std::size_t t) -> int {
                     if (t == 57) throw std::runtime_error("boom");
                     return 0;
                   },
                   3),
               std::runtime_error);
}

TEST(MonteCarlo, Summarize) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const McSummary m = summarize(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.std_error, std::sqrt(5.0 / 3.0 / 4.0));
  EXPECT_EQ(m.count, 4u);
}

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  for (int order : {1, 2, 5, 16}) {
    const GaussRule r = gauss_legendre(order);
    for (int k = 0; k < 2 * order; ++k) {
      double sum = 0.0;
      for (int i = 0; i < order; ++i) sum += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "order " << order << " degree " << k;
    }
  }
}

TEST(Spacings, ExamplesAndSum) {
  const SortedPointSet1D p({0.7, 0.2, 0.5});
  const SpacingProfile g = spacings(p);
  ASSERT_EQ(g.gaps.size(), 4u);
  EXPECT_NEAR(g.gaps[0], 0.2, 1e-15);
  EXPECT_NEAR(g.gaps[1], 0.3, 1e-15);
  EXPECT_NEAR(g.gaps[2], 0.2, 1e-15);
  EXPECT_NEAR(g.gaps[3], 0.3, 1e-15);
  EXPECT_NEAR(max_gap(g), 0.3, 1e-15);

  const SpacingProfile e = spacings(SortedPointSet1D{});
  ASSERT_EQ(e.gaps.size(), 1u);
  EXPECT_EQ(e.gaps[0], 1.0);

  RngStream s(4, 4);
  for (int t = 0; t < 100; ++t) {
    const auto gaps = spacings(sample_uniform_sorted(37, s)).gaps;
    EXPECT_NEAR(std::accumulate(gaps.begin(), gaps.end(), 0.0), 1.0, 1e-12);
    for (double l : gaps) EXPECT_GE(l, 0.0);
  }
}

TEST(Spacings, CircularGapsMergeBoundary) {
  const auto g = circular_spacings(SortedPointSet1D({0.1, 0.6})).gaps;
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(g[0], 0.5, 1e-15);
  EXPECT_NEAR(g[1], 0.5, 1e-15);
}

TEST(Spacings, RejectsOutOfRange) {
  EXPECT_THROW(SortedPointSet1D({0.5, 1.5}), InvalidArgument);
  EXPECT_THROW(SortedPointSet1D({-0.1}), InvalidArgument);
}

TEST(Spacings, PowerSum) {
  const SpacingProfile g{{0.5, 0.25, 0.25}};
  EXPECT_DOUBLE_EQ(power_sum(g, 1.0), 0.25 + 2 * 0.0625);
  EXPECT_NEAR(power_sum(g, 0.5), std::pow(0.5, 1.5) + 2 * std::pow(0.25, 1.5), 1e-15);
}

// Reference values are (n+1)!(s+1)!/(n+s+1)! in exact rational arithmetic.
TEST(Spacings, ExpectedPowerSumExact) {
  EXPECT_NEAR(expected_power_sum_exact(1, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(expected_power_sum_exact(7, 1), 0.2222222222222222, 1e-15);
  EXPECT_NEAR(expected_power_sum_exact(10, 2), 0.038461538461538464, 1e-16);
  EXPECT_NEAR(expected_power_sum_exact(100, 3) / 2.196547028071871e-05, 1.0, 1e-13);
  EXPECT_EQ(expected_power_sum_exact(0, 2), 1.0);
  // non-integer s takes the log-gamma route; compare with a neighbouring integer limit
  EXPECT_NEAR(expected_power_sum_exact(10, 2.0 + 1e-9), expected_power_sum_exact(10, 2), 1e-9);
}

TEST(Spacings, DarlingQuadratureMatchesClosedForm) {
  for (std::size_t n : {1u, 2u, 10u, 1000u, 1000000u}) {
    for (int s : {1, 2, 3}) {
      const double exact = expected_power_sum_exact(n, s);
      const double quad = expected_spacing_functional(n, [s](double r) { return std::pow(r, s + 1); });
      EXPECT_NEAR(quad / exact, 1.0, 1e-8) << "n=" << n << " s=" << s;
    }
  }
}

// Reference integrals n(n+1) int_0^1 (1-r)^(n-1) h(r) dr by adaptive
// high-precision quadrature.
TEST(Spacings, DarlingQuadratureReferenceIntegrals) {
  auto log1p_h = [](double r) { return std::log1p(r); };
  auto sqrt_h = [](double r) { return std::sqrt(r); };
  EXPECT_NEAR(expected_spacing_functional(1, log1p_h), 0.77258872223978123767, 1e-10);
  EXPECT_NEAR(expected_spacing_functional(10, log1p_h), 0.92730214468428273602, 1e-10);
  EXPECT_NEAR(expected_spacing_functional(1000, log1p_h), 0.99900398012307619976, 1e-10);
  EXPECT_NEAR(expected_spacing_functional(1, sqrt_h), 1.3333333333333333333, 1e-8);
  EXPECT_NEAR(expected_spacing_functional(10, sqrt_h) / 2.9728620193016477846, 1.0, 1e-7);
  EXPECT_NEAR(expected_spacing_functional(1000, sqrt_h) / 28.042466646405108518, 1.0, 1e-7);
}

TEST(Spacings, DarlingRejectsNonFinite) {
  EXPECT_THROW(expected_spacing_functional(5, [](double) { return NAN; }), InvariantViolation);
  EXPECT_THROW(expected_spacing_functional(5, [](double r) { return r; }, 16), InvalidArgument);
}

TEST(Spacings, MonteCarloPowerSumWithin3SE) {
  const RngStream base(2024, 1);
  for (std::size_t n : {1u, 5u, 30u}) {
    const auto v = run_trials(20000, [&](std::size_t t) {
      RngStream s = trial_stream(base, n * 100000 + t);
      return power_sum(spacings(sample_uniform_sorted(n, s)), 2.0);
    });
    const McSummary m = summarize(v);
    EXPECT_LE(std::abs(m.mean - expected_power_sum_exact(n, 2)), 3.0 * m.std_error) << "n=" << n;
  }
}

TEST(Coupon, Stats) {
  const CouponStats c2 = coupon_stats(2);
  EXPECT_DOUBLE_EQ(c2.mean, 3.0);
  EXPECT_DOUBLE_EQ(c2.variance_bound, 4.0 * 1.25);
  EXPECT_NEAR(coupon_stats(100).mean, 518.737751763962, 1e-10);
  EXPECT_NEAR(coupon_stats(10).variance_bound, 154.97677311665407, 1e-10);
  EXPECT_DOUBLE_EQ(coupon_stats(1).mean, 1.0);
  EXPECT_NEAR(harmonic_number(4), 25.0 / 12.0, 1e-15);
}

TEST(Coupon, SimulateMean) {
  const RngStream base(5, 0);
  const auto v = run_trials(20000, [&](std::size_t t) {
    RngStream s = trial_stream(base, t);
    return static_cast<double>(coupon_simulate(10, s));
  });
  const McSummary m = summarize(v);
  EXPECT_LE(std::abs(m.mean - coupon_stats(10).mean), 3.0 * m.std_error);
  for (double x : v) EXPECT_GE(x, 10.0);
  RngStream one(1, 1);
  EXPECT_EQ(coupon_simulate(1, one), 1u);
}

TEST(Coupon, TailBound) {
  const CouponTail t = coupon_tail_bound(10, 2.0);
  EXPECT_EQ(t.threshold, static_cast<std::uint64_t>(std::ceil(20.0 * std::log(10.0))));
  EXPECT_DOUBLE_EQ(t.bound, 0.1);
  EXPECT_THROW(coupon_tail_bound(1, 2.0), InvalidArgument);
  EXPECT_THROW(coupon_tail_bound(10, 0.0), InvalidArgument);
}

TEST(MonteCarlo, SummarizeDoesNotDrift) {
  // 0.1 is inexact in binary; naive accumulation of 10^6 copies is off by ~1e-12 relative
  const std::vector<double> xs(1000000, 0.1);
  const McSummary s = summarize(xs);
  EXPECT_NEAR(s.mean, 0.1, 1e-17);
  EXPECT_LT(s.variance, 1e-30);
  const std::vector<double> ys{1e16, 1.0, -1e16, 1.0};
  EXPECT_DOUBLE_EQ(summarize(ys).mean, 0.5);
}
