#pragma once

// Least-squares fit of log(value) against a transformed log n.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "randinfo/errors.hpp"

namespace randinfo {

enum class XTransform { log_n, log_n_over_log_n };

inline std::string to_string(XTransform t) { return t == XTransform::log_n ? "log_n" : "log_n_over_log_n"; }

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  XTransform x_transform = XTransform::log_n;
};

/// OLS of log(y) on log(n) or log(n / log n). Needs >= 4 points, positive y,
/// and n > e when the n/log n transform is used.
inline RateFit fit_rate(std::span<const double> n, std::span<const double> y, XTransform xt = XTransform::log_n) {
  detail::require(n.size() == y.size(), "fit_rate: size mismatch");
  detail::require(n.size() >= 4, "fit_rate: need at least 4 points");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    detail::require(y[i] > 0.0 && std::isfinite(y[i]), "fit_rate: estimates must be positive");
    detail::require(n[i] > 0.0, "fit_rate: n must be positive");
    double x = std::log(n[i]);
    if (xt == XTransform::log_n_over_log_n) {
      detail::require(x > 1.0, "fit_rate: n/log n transform needs n > e");
      x -= std::log(x);
    }
    xs.push_back(x);
    ys.push_back(std::log(y[i]));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  detail::require(sxx > 0.0, "fit_rate: n values must not all coincide");
  RateFit f;
  f.x_transform = xt;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? std::min(1.0, std::max(0.0, sxy * sxy / (sxx * syy))) : 1.0;
  return f;
}

}  // namespace randinfo
