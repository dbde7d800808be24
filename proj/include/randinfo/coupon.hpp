#pragma once

// Coupon collector variable tau_l: draws of uniform labels from {1..l}
// until every label has been seen.

#include <cmath>
#include <cstdint>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/rng.hpp"

namespace randinfo {

inline double harmonic_number(std::uint64_t ell) {
  double h = 0.0;
  for (std::uint64_t k = ell; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

struct CouponStats {
  std::uint64_t ell = 1;
  double mean = 1.0;            // l * H_l
  double variance_bound = 0.0;  // l^2 * sum_{k<=l} 1/k^2
};

inline CouponStats coupon_stats(std::uint64_t ell) {
  detail::require(ell >= 1, "coupon_stats: ell must be >= 1");
  double inv_sq = 0.0;
  for (std::uint64_t k = ell; k >= 1; --k) inv_sq += 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  const double l = static_cast<double>(ell);
  return {ell, l * harmonic_number(ell), l * l * inv_sq};
}

/// One draw of tau_ell.
inline std::uint64_t coupon_simulate(std::uint64_t ell, RngStream& rng) {
  detail::require(ell >= 1, "coupon_simulate: ell must be >= 1");
  std::vector<bool> seen(ell, false);
  std::uint64_t distinct = 0, draws = 0;
  while (distinct < ell) {
    const std::uint64_t label = rng.uniform_index(ell);
    ++draws;
    if (!seen[label]) {
      seen[label] = true;
      ++distinct;
    }
  }
  return draws;
}

struct CouponTail {
  std::uint64_t threshold;  // ceil(c * l * log l)
  double bound;             // l^(1-c)
};

/// P[tau_l > ceil(c l log l)] <= l^(1-c), natural log.
inline CouponTail coupon_tail_bound(std::uint64_t ell, double c) {
  detail::require(ell >= 2, "coupon_tail_bound: ell must be >= 2");
  detail::require(c > 0.0, "coupon_tail_bound: c must be > 0");
  const double l = static_cast<double>(ell);
  return {static_cast<std::uint64_t>(std::ceil(c * l * std::log(l))), std::pow(l, 1.0 - c)};
}

}  // namespace randinfo
