#pragma once

#include <optional>
#include <string_view>

namespace randinfo {

/// A radius value together with how it was obtained.
struct RadiusEstimate {
  enum class Kind { exact, surrogate, grid_bounded, monte_carlo };

  double value = 0.0;
  Kind kind = Kind::exact;
  std::optional<double> std_error;         // monte_carlo only
  std::optional<double> grid_error_bound;  // grid_bounded only
  // Set when the quantity has no decay in n (e.g. the W^1_1 -> L_inf
  // surrogate, whose exponent is zero).
  bool degenerate = false;

  static RadiusEstimate exact(double v) { return {v, Kind::exact, {}, {}, false}; }
  static RadiusEstimate surrogate(double v, bool degenerate = false) {
    return {v, Kind::surrogate, {}, {}, degenerate};
  }
  static RadiusEstimate grid(double v, double bound) { return {v, Kind::grid_bounded, {}, bound, false}; }
  static RadiusEstimate monte_carlo(double mean, double se, bool degenerate = false) {
    return {mean, Kind::monte_carlo, se, {}, degenerate};
  }
};

constexpr std::string_view to_string(RadiusEstimate::Kind k) {
  switch (k) {
    case RadiusEstimate::Kind::exact: return "exact";
    case RadiusEstimate::Kind::surrogate: return "surrogate";
    case RadiusEstimate::Kind::grid_bounded: return "grid_bounded";
    case RadiusEstimate::Kind::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

}  // namespace randinfo
