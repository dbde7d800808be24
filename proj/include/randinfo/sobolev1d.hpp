#pragma once

// L_q approximation on W^1_p([0,1]) from function values: the spacing
// functional that is equivalent (up to constants) to the radius of the
// information given by a point set, and its Monte Carlo expectation for
// uniform random points.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/radius.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/spacings.hpp"

namespace randinfo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1/x with 1/inf := 0.
inline double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

struct SobolevParams1D {
  double p = 2.0;  // kInf allowed
  double q = 2.0;  // kInf allowed

  void validate() const {
    detail::require(p >= 1.0 && q >= 1.0, "SobolevParams1D: need p, q >= 1");
  }
};

/// Exponent 1 - 1/p + 1/q of the max-gap branch (p <= q).
inline double max_gap_exponent(const SobolevParams1D& pr) { return 1.0 - reciprocal(pr.p) + reciprocal(pr.q); }

/// (sum_i l_i^(s+1))^(1/s), evaluated relative to the largest gap so that
/// large s does not underflow.
inline double spacing_norm(const SpacingProfile& g, double s) {
  const double top = max_gap(g);
  if (top == 0.0) return 0.0;
  double rel = 0.0;
  for (double l : g.gaps) rel += std::pow(l / top, s + 1.0);
  return std::pow(top, (s + 1.0) / s) * std::pow(rel, 1.0 / s);
}

/// Spacing functional of the radius of N_n(f) = (f(x_1), ..., f(x_n)):
///   p >  q: (sum_i l_i^((pq+p-q)/(p-q)))^(1/q - 1/p)
///   p <= q: max_i l_i^(1 - 1/p + 1/q)
/// The radius equals this only up to unspecified constants, so the result
/// is tagged `surrogate`. For (p, q) = (1, inf) the exponent vanishes; the
/// value is 1 and `degenerate` is set.
inline RadiusEstimate radius_surrogate_1d(const SortedPointSet1D& points, const SobolevParams1D& params) {
  params.validate();
  const SpacingProfile g = spacings(points);
  if (params.p > params.q) {
    // 1/s = 1/q - 1/p and s + 1 = (pq + p - q)/(p - q).
    const double s = 1.0 / (reciprocal(params.q) - reciprocal(params.p));
    return RadiusEstimate::surrogate(spacing_norm(g, s));
  }
  const double e = max_gap_exponent(params);
  if (e == 0.0) return RadiusEstimate::surrogate(1.0, true);
  return RadiusEstimate::surrogate(std::pow(max_gap(g), e));
}

/// Integration uses the same radius as L_1 approximation.
inline RadiusEstimate integration_radius(const SortedPointSet1D& points, double p) {
  return radius_surrogate_1d(points, {p, 1.0});
}

/// Equidistant midpoints (2i-1)/(2n), i = 1..n.
inline SortedPointSet1D optimal_nodes_1d(std::size_t n) {
  detail::require(n >= 1, "optimal_nodes_1d: n must be >= 1");
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = (2.0 * i + 1.0) / (2.0 * n);
  return SortedPointSet1D(std::move(pts));
}

/// Monte Carlo mean and standard error of radius_surrogate_1d over n
/// i.i.d. uniform points. Trial t draws from trial_stream(rng, t).
/// Rate of the expected surrogate for random points, without constants:
/// 1/n for p > q, (n / log n)^-(1 - 1/p + 1/q) otherwise.
inline double theory_rate_1d(double n, const SobolevParams1D& params) {
  params.validate();
  detail::require(n >= 2.0, "theory_rate_1d: n must be >= 2");
  if (params.p > params.q) return 1.0 / n;
  return std::pow(n / std::log(n), -max_gap_exponent(params));
}

inline RadiusEstimate expected_radius_mc_1d(std::size_t n, const SobolevParams1D& params, std::size_t trials,
                                            const RngStream& rng, unsigned workers = 0) {
  params.validate();
  detail::require(trials >= 100, "expected_radius_mc_1d: trials must be >= 100");
  const auto values = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream stream = trial_stream(rng, t);
        return radius_surrogate_1d(sample_uniform_sorted(n, stream), params).value;
      },
      workers);
  const bool degenerate = params.p <= params.q && max_gap_exponent(params) == 0.0;
  const McSummary s = summarize(values);
  return RadiusEstimate::monte_carlo(s.mean, s.std_error, degenerate);
}

}  // namespace randinfo
