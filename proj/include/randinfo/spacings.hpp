#pragma once

// Uniform point sets on [0,1] and their spacings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/quadrature.hpp"
#include "randinfo/rng.hpp"

namespace randinfo {

/// Points x_1 <= ... <= x_n in [0,1]. The endpoints x_0 = 0 and
/// x_{n+1} = 1 are implicit. Duplicates are allowed.
class SortedPointSet1D {
 public:
  SortedPointSet1D() = default;

  /// Validates and sorts.
  explicit SortedPointSet1D(std::vector<double> points) : points_(std::move(points)) {
    for (double x : points_)
      detail::require(x >= 0.0 && x <= 1.0, "SortedPointSet1D: point outside [0,1]: " + std::to_string(x));
    std::sort(points_.begin(), points_.end());
  }

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Returns a copy with x inserted.
  SortedPointSet1D with_point(double x) const {
    std::vector<double> pts = points_;
    pts.push_back(x);
    return SortedPointSet1D(std::move(pts));
  }

 private:
  std::vector<double> points_;
};

/// The n+1 gaps l_0, ..., l_n of a point set, boundary gaps included.
struct SpacingProfile {
  std::vector<double> gaps;
};

inline SortedPointSet1D sample_uniform_sorted(std::size_t n, RngStream& rng) {
  std::vector<double> pts(n);
  for (double& x : pts) x = rng.uniform();
  return SortedPointSet1D(std::move(pts));
}

inline SpacingProfile spacings(const SortedPointSet1D& p) {
  SpacingProfile out;
  out.gaps.reserve(p.size() + 1);
  double prev = 0.0;
  for (double x : p.points()) {
    out.gaps.push_back(x - prev);
    prev = x;
  }
  out.gaps.push_back(1.0 - prev);
  return out;
}

/// Gaps of the point set viewed on the circle R/Z: the two boundary gaps
/// merge into one. An empty set has the single gap 1.
inline SpacingProfile circular_spacings(const SortedPointSet1D& p) {
  if (p.empty()) return {{1.0}};
  const auto pts = p.points();
  SpacingProfile out;
  out.gaps.reserve(pts.size());
  for (std::size_t i = 1; i < pts.size(); ++i) out.gaps.push_back(pts[i] - pts[i - 1]);
  out.gaps.push_back(1.0 - pts.back() + pts.front());
  return out;
}

/// sum_i l_i^(s+1).
inline double power_sum(const SpacingProfile& g, double s) {
  detail::require(s >= 0.0, "power_sum: s must be >= 0");
  const double e = s + 1.0;
  const bool integral = (e == std::floor(e)) && e <= 16.0;
  double sum = 0.0;
  for (double l : g.gaps) {
    if (integral) {
      double v = 1.0;
      for (int k = 0; k < static_cast<int>(e); ++k) v *= l;
      sum += v;
    } else {
      sum += std::pow(l, e);
    }
  }
  return sum;
}

inline double max_gap(const SpacingProfile& g) {
  return g.gaps.empty() ? 0.0 : *std::max_element(g.gaps.begin(), g.gaps.end());
}

/// E[sum_i l_i^(s+1)] for n uniform points:
///   n(n+1) B(s+2, n) = (n+1)! (s+1)! / (n+s+1)!.
/// Integer s uses the telescoped product prod_{k=1..s} (k+1)/(n+1+k), which
/// neither overflows nor suffers log-gamma cancellation; non-integer s falls
/// back to log-gamma. n = 0 gives 1 (a single full gap).
inline double expected_power_sum_exact(std::size_t n, double s) {
  detail::require(s >= 0.0, "expected_power_sum_exact: s must be >= 0");
  const double nn = static_cast<double>(n);
  if (s == std::floor(s) && s <= 1e6) {
    double v = 1.0;
    for (int k = 1; k <= static_cast<int>(s); ++k) v *= (k + 1.0) / (nn + 1.0 + k);
    return v;
  }
  return std::exp(std::lgamma(nn + 2.0) + std::lgamma(s + 2.0) - std::lgamma(nn + s + 2.0));
}

/// E[sum_i h(l_i)] for n uniform points via Darling's identity
///   n(n+1) * int_0^1 (1-r)^(n-1) h(r) dr.
/// With u = (1-r)^n, v = -log u and v = 64 t^2 the right-hand side becomes
///   (n+1) * int_0^1 128 t e^(-64 t^2) h(1 - e^(-64 t^2 / n)) dt,
/// integrated by composite 16-point Gauss-Legendre on equal panels in t.
/// The square-root substitution keeps power-type behaviour of h at 0
/// smooth in t. The neglected tail is below e^-64 * sup|h|. n = 0 returns
/// h(1).
inline double expected_spacing_functional(std::size_t n, const std::function<double(double)>& h,
                                          std::size_t quadrature_points = 128) {
  detail::require(quadrature_points >= 64, "expected_spacing_functional: need at least 64 quadrature points");
  auto eval = [&](double r) {
    const double v = h(r);
    if (!std::isfinite(v))
      throw InvariantViolation("expected_spacing_functional: h(" + std::to_string(r) + ") is not finite");
    return v;
  };
  if (n == 0) return eval(1.0);

  constexpr int kOrder = 16;
  constexpr double kUpper = 64.0;
  static const GaussRule rule = gauss_legendre(kOrder);
  const std::size_t panels = quadrature_points / kOrder;
  const double nn = static_cast<double>(n);

  double total = 0.0;
  for (std::size_t j = 0; j < panels; ++j) {
    const double half = 0.5 / static_cast<double>(panels);
    const double mid = (static_cast<double>(j) + 0.5) / static_cast<double>(panels);
    double panel = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      const double t = mid + half * rule.nodes[i];
      const double v = kUpper * t * t;
      panel += rule.weights[i] * 2.0 * kUpper * t * std::exp(-v) * eval(-std::expm1(-v / nn));
    }
    total += half * panel;
  }
  return (nn + 1.0) * total;
}

}  // namespace randinfo
