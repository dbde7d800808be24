#pragma once

// Sections of a centered ellipsoid sum x_k^2 / sigma_k^2 <= 1 by the kernel
// of Gaussian information. The radius is the circumradius of the section,
//   r = lambda_min(B' D^-2 B)^(-1/2),  D = diag(sigma),
// for an orthonormal kernel basis B. Two routes compute it:
//   dense    eigen-solve of the (m-n) x (m-n) compressed matrix;
//   secular  bisection on mu using only the n-dimensional row space Q.
//            With a = sigma^-2, the number of constrained eigenvalues
//            below mu is #{a_i < mu} + #{positive eigenvalues of
//            Q' (diag(a) - mu)^-1 Q} - n (Haynsworth inertia applied to
//            the bordered matrix [diag(a) - mu, Q; Q', 0]).
// The secular route is far cheaper when n << m.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/l1_recovery.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/radius.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/subspace.hpp"

namespace randinfo {

/// Semi-axes sigma_1 >= ... >= sigma_m > 0.
class SemiAxes {
 public:
  explicit SemiAxes(std::vector<double> sigma) : sigma_(std::move(sigma)) {
    detail::require(!sigma_.empty(), "SemiAxes: at least one semi-axis required");
    for (std::size_t k = 0; k < sigma_.size(); ++k) {
      detail::require(std::isfinite(sigma_[k]) && sigma_[k] > 0.0, "SemiAxes: semi-axes must be positive and finite");
      detail::require(k == 0 || sigma_[k] <= sigma_[k - 1], "SemiAxes: semi-axes must be non-increasing");
    }
  }

  std::size_t size() const { return sigma_.size(); }
  double operator[](std::size_t k) const { return sigma_[k]; }
  std::span<const double> values() const { return sigma_; }
  double largest() const { return sigma_.front(); }
  // sigma_{n+1} in 1-based terms, 0 once n >= m
  double after(std::size_t n) const { return n < sigma_.size() ? sigma_[n] : 0.0; }
  bool is_sphere() const { return sigma_.front() == sigma_.back(); }

 private:
  std::vector<double> sigma_;
};

/// sigma_k = constant * k^-alpha * ln^-beta(k + 1).
struct AxisLaw {
  double alpha = 1.0;
  double beta = 0.0;
  double constant = 1.0;

  void validate() const {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "AxisLaw: alpha > 0 required");
    detail::require(std::isfinite(beta), "AxisLaw: beta must be finite");
    detail::require(std::isfinite(constant) && constant > 0.0, "AxisLaw: constant > 0 required");
  }

  double sigma(std::size_t k) const {
    const double kk = static_cast<double>(k);
    return constant * std::pow(kk, -alpha) * std::pow(std::log(kk + 1.0), -beta);
  }

  /// First m semi-axes; throws InvalidArgument if they are not non-increasing.
  SemiAxes axes(std::size_t m) const {
    validate();
    std::vector<double> s(m);
    for (std::size_t k = 1; k <= m; ++k) s[k - 1] = sigma(k);
    return SemiAxes(std::move(s));
  }

  bool square_summable() const { return alpha > 0.5 || (alpha == 0.5 && beta > 0.5); }
};

/// Upper bound for sum_{k > m} sigma_k^2 (infinite when the law is not
/// square summable), from the integral of the decreasing tail.
inline double truncation_tail_bound(const AxisLaw& law, std::size_t m) {
  law.validate();
  detail::require(m >= 2, "truncation_tail_bound: m >= 2 required");
  if (!law.square_summable()) return std::numeric_limits<double>::infinity();
  const double c2 = law.constant * law.constant, mm = static_cast<double>(m);
  if (law.alpha == 0.5) return c2 * std::pow(std::log(mm), 1.0 - 2.0 * law.beta) / (2.0 * law.beta - 1.0);
  if (law.beta >= 0.0)
    return c2 * std::pow(std::log(mm + 1.0), -2.0 * law.beta) * std::pow(mm, 1.0 - 2.0 * law.alpha) /
           (2.0 * law.alpha - 1.0);
  // ln(x+1) <= ln(m+1) (x/m)^delta for x >= m, delta = 1/ln(m+1)
  const double lm = std::log(mm + 1.0), delta = 1.0 / lm;
  const double e = 2.0 * law.alpha - 1.0 + 2.0 * law.beta * delta;
  if (e <= 0.0) return std::numeric_limits<double>::infinity();
  return c2 * std::pow(lm, -2.0 * law.beta) * std::pow(mm, 1.0 - 2.0 * law.alpha) / e;
}

enum class Regime { useless_below_cm, sqrt_log_penalty, optimal_order };

constexpr const char* to_string(Regime r) {
  switch (r) {
    case Regime::useless_below_cm: return "useless_below_cm";
    case Regime::sqrt_log_penalty: return "sqrt_log_penalty";
    case Regime::optimal_order: return "optimal_order";
  }
  return "unknown";
}

struct RegimePrediction {
  Regime regime = Regime::optimal_order;
  std::string validity_range;  // symbolic; the constant c in c_m is not known
};

inline RegimePrediction classify_regime(const AxisLaw& law) {
  law.validate();
  if (law.alpha > 0.5) return {Regime::optimal_order, "n < m"};
  if (law.alpha == 0.5 && law.beta > 0.5) return {Regime::sqrt_log_penalty, "n < sqrt(m)"};
  return {Regime::useless_below_cm, "n < c_m"};
}

/// Order of E[r] predicted for the regime, without constants.
inline double regime_rate(const AxisLaw& law, std::size_t n) {
  const double next = law.sigma(n + 1);
  switch (classify_regime(law).regime) {
    case Regime::optimal_order: return next;
    case Regime::sqrt_log_penalty: return next * std::sqrt(std::log(static_cast<double>(n) + 1.0));
    case Regime::useless_below_cm: return law.sigma(1);
  }
  return next;
}

/// Circumradius of the section of the ellipsoid by span(B), B orthonormal
/// (m x k). Dense symmetric eigen-solve.
inline double circumradius(const SemiAxes& sigma, const Eigen::MatrixXd& B) {
  detail::require(static_cast<std::size_t>(B.rows()) == sigma.size(), "circumradius: basis has wrong row count");
  if (B.cols() == 0) return 0.0;
  if (sigma.is_sphere()) return sigma.largest();
  Eigen::VectorXd inv(B.rows());
  for (Eigen::Index i = 0; i < B.rows(); ++i) inv[i] = 1.0 / sigma[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd C = inv.asDiagonal() * B;
  const Eigen::MatrixXd M = C.transpose() * C;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("circumradius: eigen-solve failed");
  const double lmin = es.eigenvalues()[0];
  if (!(lmin > 0.0))
    throw InvariantViolation("circumradius: compressed matrix not positive definite, lambda_min = " +
                             std::to_string(lmin) + ", k = " + std::to_string(B.cols()));
  return 1.0 / std::sqrt(lmin);
}

/// Circumradius of the section by the orthogonal complement of span(Q),
/// Q orthonormal (m x n), by bisection on the inertia count.
inline double circumradius_secular(const SemiAxes& sigma, const Eigen::MatrixXd& Q) {
  const std::size_t m = sigma.size(), n = static_cast<std::size_t>(Q.cols());
  detail::require(static_cast<std::size_t>(Q.rows()) == m, "circumradius_secular: basis has wrong row count");
  if (n >= m) return 0.0;
  if (n == 0 || sigma.is_sphere()) return sigma.largest();
  Eigen::VectorXd a(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) a[static_cast<Eigen::Index>(i)] = 1.0 / (sigma[i] * sigma[i]);
  // interlacing: a_1 <= mu* <= a_{n+1}
  double lo = a[0], hi = a[static_cast<Eigen::Index>(n)];
  if (lo == hi) return 1.0 / std::sqrt(lo);
  Eigen::MatrixXd W(Q.rows(), Q.cols());
  auto below = [&](double mu) {
    std::size_t cnt = 0;
    Eigen::VectorXd w(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      double d = a[i] - mu;
      if (d == 0.0) d = std::numeric_limits<double>::min();
      if (d < 0.0) ++cnt;
      w[i] = 1.0 / d;
    }
    W = w.asDiagonal() * Q;
    const Eigen::MatrixXd S = Q.transpose() * W;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 0.0) ++cnt;
    return static_cast<long long>(cnt) - static_cast<long long>(n);
  };
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below(mid) >= 1 ? hi : lo) = mid;
  }
  return 1.0 / std::sqrt(0.5 * (lo + hi));
}

/// Circumradius of the section by ker G, choosing the cheaper route.
/// Requires rank(G) = rows(G).
inline double circumradius_of_kernel(const SemiAxes& sigma, const InfoMatrix& G) {
  const double m = static_cast<double>(G.cols()), n = static_cast<double>(G.rows()), k = m - n;
  detail::require(G.cols() == static_cast<Eigen::Index>(sigma.size()), "circumradius_of_kernel: size mismatch");
  const double dense_cost = m * m * n + k * k * m + 10.0 * k * k * k;
  const double secular_cost = 60.0 * (m * n * n + 10.0 * n * n * n);
  const bool secular = secular_cost < dense_cost;
  const detail::SubspaceSplit sp = detail::split_subspaces(G, !secular);
  if (sp.row_space.cols() != G.rows()) throw InvalidArgument("circumradius_of_kernel: information matrix is rank deficient");
  return secular ? circumradius_secular(sigma, sp.row_space) : circumradius(sigma, sp.kernel);
}

struct SandwichResult {
  bool ok = false;
  double r = 0.0;
  double lower = 0.0;  // sigma_{n+1}
  double upper = 0.0;  // sigma_1
};

/// Checks sigma_{n+1} <= r <= sigma_1 (within 1e-10) for the section by
/// span(B), n = m - cols(B).
inline SandwichResult sandwich_check(const SemiAxes& sigma, const Eigen::MatrixXd& B) {
  detail::require(static_cast<std::size_t>(B.cols()) <= sigma.size(), "sandwich_check: too many basis columns");
  const std::size_t n = sigma.size() - static_cast<std::size_t>(B.cols());
  SandwichResult s;
  s.r = circumradius(sigma, B);
  s.lower = sigma.after(n);
  s.upper = sigma.largest();
  s.ok = s.lower - 1e-10 <= s.r && s.r <= s.upper + 1e-10;
  return s;
}

/// Monte Carlo mean of the circumradius over Gaussian G (n x m).
inline RadiusEstimate expected_radius_mc_ell(const SemiAxes& sigma, std::size_t n, std::size_t trials,
                                             const RngStream& rng, unsigned workers = 0) {
  detail::require(trials >= 20, "expected_radius_mc_ell: trials must be >= 20");
  detail::require(n <= sigma.size(), "expected_radius_mc_ell: n <= m required");
  if (n == 0) return RadiusEstimate::monte_carlo(sigma.largest(), 0.0);
  const auto values = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream s = trial_stream(rng, t);
        return circumradius_of_kernel(sigma, gaussian_info(n, sigma.size(), s));
      },
      workers);
  const McSummary sm = summarize(values);
  return RadiusEstimate::monte_carlo(sm.mean, sm.std_error);
}

struct DichotomyRow {
  std::size_t m = 0;
  std::size_t n = 0;
  double mean_radius = 0.0;
  double std_error = 0.0;
  double ratio_to_sigma1 = 0.0;  // E[r] / sigma_1
  double sqrt_n_mean = 0.0;      // sqrt(n) E[r]
  bool square_summable = false;
  double tail_bound = 0.0;       // bound on sum_{k>m} sigma_k^2
  bool tail_ok = false;          // tail_bound <= 1e-4 sigma_1^2
  std::string caveat;
};

namespace detail {

inline DichotomyRow dichotomy_row(const AxisLaw& law, std::size_t m, std::size_t n, std::size_t trials,
                                  const RngStream& rng, unsigned workers) {
  const SemiAxes axes = law.axes(m);
  const RadiusEstimate e = expected_radius_mc_ell(axes, n, trials, rng, workers);
  DichotomyRow row;
  row.m = m;
  row.n = n;
  row.mean_radius = e.value;
  row.std_error = *e.std_error;
  row.ratio_to_sigma1 = e.value / axes.largest();
  row.sqrt_n_mean = std::sqrt(static_cast<double>(n)) * e.value;
  row.square_summable = law.square_summable();
  row.tail_bound = truncation_tail_bound(law, m);
  row.tail_ok = row.tail_bound <= 1e-4 * axes.largest() * axes.largest();
  if (!row.square_summable)
    row.caveat = "not square summable: finite truncation stands in for the infinite ellipsoid";
  else if (!row.tail_ok)
    row.caveat = "truncation tail exceeds 1e-4 sigma_1^2";
  return row;
}

}  // namespace detail

/// E[r] / sigma_1 along increasing truncation sizes m at fixed n.
inline std::vector<DichotomyRow> dichotomy_experiment(const AxisLaw& law, std::span<const std::size_t> m_grid,
                                                      std::size_t n, std::size_t trials, const RngStream& rng,
                                                      unsigned workers = 0) {
  law.validate();
  detail::require(n >= 1, "dichotomy_experiment: n >= 1 required");
  std::vector<DichotomyRow> rows;
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    detail::require(g == 0 || m_grid[g] > m_grid[g - 1], "dichotomy_experiment: m grid must increase");
    detail::require(m_grid[g] >= std::max<std::size_t>(n, 2), "dichotomy_experiment: m >= max(n, 2) required");
    rows.push_back(detail::dichotomy_row(law, m_grid[g], n, trials, trial_stream(rng, g), workers));
  }
  return rows;
}

/// sqrt(n) E[r] along an n grid at fixed truncation m.
inline std::vector<DichotomyRow> dichotomy_n_sweep(const AxisLaw& law, std::size_t m,
                                                   std::span<const std::size_t> n_grid, std::size_t trials,
                                                   const RngStream& rng, unsigned workers = 0) {
  law.validate();
  std::vector<DichotomyRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    detail::require(n_grid[g] >= 1 && n_grid[g] <= m, "dichotomy_n_sweep: 1 <= n <= m required");
    rows.push_back(detail::dichotomy_row(law, m, n_grid[g], trials, trial_stream(rng, g), workers));
  }
  return rows;
}

}  // namespace randinfo
