#pragma once

// Gaussian linear information on l1^m measured in l2^m: the basis pursuit
// decoder, the local radius of zero information
//   r(G, 0) = sup{ ||x||_2 : ||x||_1 <= 1, G x = 0 },
// exactly (small m) and as a lower bound (any m), and the Monte Carlo
// experiments built on them.
//
// The section K = ker G ∩ B_1 is a polytope whose vertices are w/||w||_1
// for the circuits w of G: kernel vectors whose support S has
// nullity(G_S) = 1. ||.||_2 is convex, so its maximum over K sits at one
// of these.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randinfo/errors.hpp"
#include "randinfo/l1_lp.hpp"
#include "randinfo/monte_carlo.hpp"
#include "randinfo/rng.hpp"
#include "randinfo/subspace.hpp"

namespace randinfo {

inline InfoMatrix gaussian_info(std::size_t n, std::size_t m, RngStream& rng) {
  detail::require(n >= 1 && m >= 1, "gaussian_info: n, m >= 1 required");
  InfoMatrix G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) G(i, j) = rng.normal();
  return G;
}

struct BPSolution {
  Eigen::VectorXd x;
  double feas_residual = 0.0;  // ||G x - y||_2
  double opt_gap_bound = 0.0;  // ||x||_1 - y' lambda, >= 0
  Eigen::VectorXd lambda;      // dual certificate, ||G' lambda||_inf <= 1
};

struct BPTolerances {
  std::optional<double> eps_feas;  // default 1e-10 ||y|| + 1e-12
  std::optional<double> eps_opt;   // default 1e-6 ||x||_1
};

/// argmin ||x||_1 subject to G x = y, with a certified optimality gap.
inline BPSolution basis_pursuit(const InfoMatrix& G, const Eigen::VectorXd& y, BPTolerances tol = {}) {
  detail::require(G.rows() == y.size(), "basis_pursuit: dimension mismatch");
  detail::require(G.allFinite() && y.allFinite(), "basis_pursuit: non-finite input");
  const double eps_feas = tol.eps_feas.value_or(1e-10 * y.norm() + 1e-12);
  BPSolution out;
  if (y.isZero(0.0)) {
    out.x = Eigen::VectorXd::Zero(G.cols());
    out.lambda = Eigen::VectorXd::Zero(G.rows());
    return out;
  }
  L1LpResult lp = l1_minimize(G, y);
  // one step of refinement on the final support
  Eigen::VectorXd res = y - G * lp.x;
  if (res.norm() > eps_feas && !lp.support.empty()) {
    Eigen::MatrixXd B(G.rows(), static_cast<Eigen::Index>(lp.support.size()));
    for (std::size_t i = 0; i < lp.support.size(); ++i) B.col(static_cast<Eigen::Index>(i)) = G.col(lp.support[i]);
    const Eigen::VectorXd delta = B.partialPivLu().solve(res);
    for (std::size_t i = 0; i < lp.support.size(); ++i) lp.x[lp.support[i]] += delta[static_cast<Eigen::Index>(i)];
    res = y - G * lp.x;
  }
  out.x = lp.x;
  out.lambda = lp.lambda;
  out.feas_residual = res.norm();
  const double l1 = out.x.lpNorm<1>();
  out.opt_gap_bound = std::max(0.0, l1 - y.dot(out.lambda));
  const double eps_opt = tol.eps_opt.value_or(1e-6 * l1);
  if (out.feas_residual > eps_feas || out.opt_gap_bound > eps_opt)
    throw ConvergenceError("basis_pursuit: residual " + std::to_string(out.feas_residual) + " (tol " +
                           std::to_string(eps_feas) + "), gap " + std::to_string(out.opt_gap_bound) + " (tol " +
                           std::to_string(eps_opt) + ")");
  return out;
}

namespace detail {

// ||w||_2 / ||w||_1 for the one-dimensional kernel of the columns S of A,
// or nothing when the kernel is not one-dimensional.
inline std::optional<double> circuit_ratio(const Eigen::MatrixXd& A, std::span<const int> S,
                                           bool require_full_support) {
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = A.col(S[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() != 1) return std::nullopt;
  const Eigen::VectorXd w = lu.kernel().col(0);
  const double top = w.cwiseAbs().maxCoeff();
  if (require_full_support && w.cwiseAbs().minCoeff() <= 1e-9 * top) return std::nullopt;
  return w.norm() / w.lpNorm<1>();
}

inline double binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(m - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace detail

/// Number of column subsets radius_zero_exact examines for an m-column
/// matrix of rank r.
inline double section_subset_count(std::size_t m, std::size_t r) {
  double total = 0.0;
  for (std::size_t j = 1; j <= std::min(r + 1, m); ++j) total += detail::binomial(m, j);
  return total;
}

constexpr double kSectionSubsetCap = 2e6;

/// Exact r(G, 0) by enumerating circuits of G. Throws ResourceGuard when
/// more than kSectionSubsetCap column subsets would be examined.
inline double radius_zero_exact(const InfoMatrix& G) {
  const Eigen::MatrixXd A = row_space_basis(G).transpose();
  const std::size_t m = static_cast<std::size_t>(G.cols()), r = static_cast<std::size_t>(A.rows());
  if (r == 0) return 1.0;
  if (r == m) return 0.0;
  const double count = section_subset_count(m, r);
  if (count > kSectionSubsetCap)
    throw ResourceGuard("radius_zero_exact: " + std::to_string(count) + " column subsets exceed the cap");
  double best = 0.0;
  std::vector<int> S;
  for (std::size_t j = 1; j <= std::min(r + 1, m); ++j) {
    S.resize(j);
    std::iota(S.begin(), S.end(), 0);
    for (;;) {
      if (auto v = detail::circuit_ratio(A, S, true)) best = std::max(best, *v);
      // next combination in lexicographic order
      std::size_t i = j;
      while (i > 0 && S[i - 1] == static_cast<int>(m - j + i - 1)) --i;
      if (i == 0) break;
      ++S[i - 1];
      for (std::size_t k = i; k < j; ++k) S[k] = S[k - 1] + 1;
    }
  }
  return std::min(best, 1.0);
}

namespace detail {

// Swap local search over (r+1)-column supports, first improvement.
inline double improve_by_swaps(const Eigen::MatrixXd& A, std::vector<int> S, double value) {
  const std::size_t m = static_cast<std::size_t>(A.cols());
  std::vector<char> in(m, 0);
  for (int j : S) in[j] = 1;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < S.size() && !improved; ++a) {
      for (std::size_t b = 0; b < m && !improved; ++b) {
        if (in[b] != 0) continue;
        std::vector<int> T = S;
        T[a] = static_cast<int>(b);
        const auto v = circuit_ratio(A, T, false);
        if (v && *v > value * (1.0 + 1e-13)) {
          in[S[a]] = 0;
          in[b] = 1;
          S = std::move(T);
          value = *v;
          improved = true;
        }
      }
    }
  }
  return value;
}

}  // namespace detail

/// Lower bound for r(G, 0): from each random direction v, repeatedly move
/// to the vertex of the section maximizing <v, .> and set v to that
/// vertex, until the norm stops growing. When cheap enough the best
/// vertex is then polished by single-column swaps. Every returned value is
/// the norm of a point of the section.
inline double radius_zero_lower(const InfoMatrix& G, std::size_t restarts, RngStream& rng) {
  detail::require(restarts >= 1, "radius_zero_lower: restarts >= 1 required");
  const Eigen::MatrixXd Gr = row_space_basis(G).transpose();
  const Eigen::Index m = G.cols(), r = Gr.rows();
  if (r == 0) return 1.0;
  if (r == m) return 0.0;

  Eigen::MatrixXd A(r + 1, m);
  A.topRows(r) = Gr;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r + 1);
  rhs[r] = 1.0;

  double best = 0.0;
  std::vector<int> best_support;
  Eigen::VectorXd v(m);
  for (std::size_t k = 0; k < restarts; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) v[i] = rng.normal();
    std::vector<int> warm;
    double cur = 0.0;
    for (int step = 0; step < 200; ++step) {
      A.row(r) = v.transpose();
      // max <v, z> over the section = 1 / min{ ||z||_1 : G z = 0, <v, z> = 1 }
      const L1LpResult lp = l1_minimize(A, rhs, warm.empty() ? nullptr : &warm);
      const Eigen::VectorXd x = lp.x / lp.objective;
      const double val = x.norm();
      warm = lp.support;
      if (val <= cur * (1.0 + 1e-14)) break;
      cur = val;
      if (cur > best) {
        best = cur;
        best_support = lp.support;
      }
      v = x / val;
    }
  }
  const double sz = static_cast<double>(r + 1);
  if (sz * static_cast<double>(m - r - 1) * sz * sz * sz <= 2e7)
    best = detail::improve_by_swaps(Gr, best_support, best);
  return std::min(best, 1.0);
}

struct KggRow {
  std::size_t n = 0;
  double mean_lower = 0.0;
  double std_error = 0.0;
  std::optional<double> exact_mean;
  std::optional<double> exact_std_error;
  double reference = 0.0;  // min{1, sqrt(log(1 + m/n) / n)}
  double ratio = 0.0;      // mean_lower / reference
  std::optional<double> exact_ratio;
};

inline double kgg_reference(std::size_t m, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::min(1.0, std::sqrt(std::log1p(static_cast<double>(m) / nn) / nn));
}

/// Monte Carlo table of E[r(G, 0)] against the reference rate, one row per
/// n. Exact values are added where the circuit enumeration fits the cap.
inline std::vector<KggRow> kgg_rate_check(std::size_t m, std::span<const std::size_t> n_grid, std::size_t trials,
                                          std::size_t restarts, const RngStream& rng, unsigned workers = 0) {
  detail::require(m >= 1 && trials >= 2, "kgg_rate_check: m >= 1, trials >= 2 required");
  std::vector<KggRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t n = n_grid[g];
    detail::require(n >= 1 && n <= m, "kgg_rate_check: grid entries must lie in [1, m]");
    const bool with_exact = section_subset_count(m, n) <= kSectionSubsetCap;
    struct Sample {
      double lower, exact;
    };
    const auto samples = run_trials(
        trials,
        [&](std::size_t t) {
          RngStream s = trial_stream(rng, g * trials + t);
          const InfoMatrix G = gaussian_info(n, m, s);
          const double lo = radius_zero_lower(G, restarts, s);
          return Sample{lo, with_exact ? radius_zero_exact(G) : 0.0};
        },
        workers);
    std::vector<double> lo(trials), ex(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      lo[t] = samples[t].lower;
      ex[t] = samples[t].exact;
    }
    KggRow row;
    row.n = n;
    const McSummary sl = summarize(lo);
    row.mean_lower = sl.mean;
    row.std_error = sl.std_error;
    row.reference = kgg_reference(m, n);
    row.ratio = row.mean_lower / row.reference;
    if (with_exact) {
      const McSummary se = summarize(ex);
      row.exact_mean = se.mean;
      row.exact_std_error = se.std_error;
      row.exact_ratio = se.mean / row.reference;
    }
    rows.push_back(row);
  }
  return rows;
}

struct SuccessRate {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Fraction of trials in which basis pursuit recovers a random sparse unit
/// vector (random support, entries +-1/sqrt(s)) to 1e-6 in l2.
inline SuccessRate sparse_recovery_experiment(std::size_t m, std::size_t n, std::size_t sparsity,
                                              std::size_t trials, const RngStream& rng, unsigned workers = 0) {
  detail::require(n >= 1 && n <= m, "sparse_recovery_experiment: 1 <= n <= m required");
  detail::require(sparsity <= m, "sparse_recovery_experiment: sparsity <= m required");
  detail::require(trials >= 2, "sparse_recovery_experiment: trials >= 2 required");
  const auto hits = run_trials(
      trials,
      [&](std::size_t t) {
        RngStream s = trial_stream(rng, t);
        const InfoMatrix G = gaussian_info(n, m, s);
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        std::vector<int> idx(m);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < sparsity; ++i) {
          const std::size_t j = i + s.uniform_index(m - i);
          std::swap(idx[i], idx[j]);
          x0[idx[i]] = (s.uniform_index(2) == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(sparsity));
        }
        const BPSolution bp = basis_pursuit(G, G * x0);
        return (bp.x - x0).norm() <= 1e-6 ? 1.0 : 0.0;
      },
      workers);
  const McSummary sm = summarize(hits);
  return {sm.mean, sm.std_error, trials};
}

}  // namespace randinfo
