#pragma once

// min ||x||_1 subject to A x = b for a dense A with full row rank.
//
// Revised primal simplex on the standard form
//   min 1'(u + w)  s.t.  [A, -A] (u; w) = b,  u, w >= 0.
// A basic solution is a choice of rank(A) columns of A with a sign each,
// so a feasible start comes from any column basis of A (flip the sign of
// each negative coordinate); no phase one is needed. The simplex
// multipliers lambda of the final basis satisfy |A_j' lambda| <= 1 for all
// j at optimality, which is exactly a dual certificate for the l1 problem.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "randinfo/errors.hpp"

namespace randinfo {

struct L1LpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;   // dual point, scaled so that ||A' lambda||_inf <= 1
  std::vector<int> support;  // basic columns of A, ascending
  double objective = 0.0;    // ||x||_1
  double dual_value = 0.0;   // b' lambda
  std::size_t pivots = 0;
};

namespace detail {

class L1Simplex {
 public:
  L1Simplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) : A_(A), b_(b), rows_(A.rows()), cols_(A.cols()) {}

  L1LpResult solve(const std::vector<int>* warm_start, std::size_t max_pivots) {
    if (rows_ == 0) {
      L1LpResult r;
      r.x = Eigen::VectorXd::Zero(cols_);
      r.lambda = Eigen::VectorXd::Zero(0);
      return r;
    }
    init_basis(warm_start);
    std::size_t pivots = 0, degenerate_run = 0, since_refactor = 0;
    bool bland = false;
    for (;;) {
      if (pivots >= max_pivots)
        throw ConvergenceError("l1 simplex: no optimal basis after " + std::to_string(pivots) + " pivots");
      if (since_refactor >= 50) {
        refactor();
        since_refactor = 0;
      }
      // simplex multipliers: B' lambda = c_B, c_B = 1 for every basic variable
      const Eigen::VectorXd lambda = Binv_.transpose() * Eigen::VectorXd::Ones(rows_);
      const Eigen::VectorXd g = A_.transpose() * lambda;
      // reduced costs: u_j -> 1 - g_j, w_j -> 1 + g_j
      int j = -1;
      double sgn = 1.0;
      double best = -kPriceTol;
      for (Eigen::Index c = 0; c < cols_; ++c) {
        if (in_basis_[c] != 0) continue;
        const double ru = 1.0 - g[c], rw = 1.0 + g[c];
        if (std::min(ru, rw) < best) {
          best = std::min(ru, rw);
          j = static_cast<int>(c);
          sgn = ru <= rw ? 1.0 : -1.0;
          if (bland) break;
        }
      }
      if (j == -1) break;
      const Eigen::VectorXd d = Binv_ * (sgn * A_.col(j));
      Eigen::Index leave = -1;
      double t = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (d[i] <= kPivotTol) continue;
        const double ti = std::max(0.0, xB_[i]) / d[i];
        if (ti < t - 1e-15 || (ti <= t + 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
          t = ti;
          leave = i;
        }
      }
      if (leave < 0) throw ConvergenceError("l1 simplex: unbounded direction (inconsistent data)");
      xB_ -= t * d;
      xB_[leave] = t;
      in_basis_[basis_[leave]] = 0;
      basis_[leave] = j;
      sign_[leave] = sgn;
      in_basis_[j] = 1;
      // B^{-1} update for the replaced column
      const double piv = d[leave];
      Binv_.row(leave) /= piv;
      for (Eigen::Index i = 0; i < rows_; ++i)
        if (i != leave && d[i] != 0.0) Binv_.row(i) -= d[i] * Binv_.row(leave);
      ++pivots;
      ++since_refactor;
      degenerate_run = t == 0.0 ? degenerate_run + 1 : 0;
      if (degenerate_run > 2 * static_cast<std::size_t>(rows_) + 10) bland = true;
    }
    refactor();
    return finish(pivots);
  }

 private:
  static constexpr double kPriceTol = 1e-11;
  static constexpr double kPivotTol = 1e-11;

  const Eigen::MatrixXd& A_;
  const Eigen::VectorXd& b_;
  Eigen::Index rows_, cols_;
  std::vector<int> basis_;   // column index of A per basic row
  std::vector<double> sign_;  // +1 for u, -1 for w
  std::vector<char> in_basis_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd xB_;

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd B(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) B.col(i) = sign_[i] * A_.col(basis_[i]);
    return B;
  }

  void refactor() {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix());
    Binv_ = lu.inverse();
    xB_ = lu.solve(b_);
    for (Eigen::Index i = 0; i < rows_; ++i)
      if (xB_[i] < 0.0) xB_[i] = 0.0;  // rounding only: the basis is primal feasible
  }

  void init_basis(const std::vector<int>* warm) {
    basis_.clear();
    if (warm != nullptr && static_cast<Eigen::Index>(warm->size()) == rows_) {
      Eigen::MatrixXd B(rows_, rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) B.col(i) = A_.col((*warm)[i]);
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (lu.rank() == rows_) basis_ = *warm;
    }
    if (basis_.empty()) {
      const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A_);
      if (qr.rank() < rows_) throw InvalidArgument("l1 simplex: matrix does not have full row rank");
      for (Eigen::Index i = 0; i < rows_; ++i) basis_.push_back(static_cast<int>(qr.colsPermutation().indices()[i]));
    }
    in_basis_.assign(cols_, 0);
    for (int j : basis_) in_basis_[j] = 1;
    Eigen::MatrixXd B(rows_, rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) B.col(i) = A_.col(basis_[i]);
    const Eigen::VectorXd z = B.partialPivLu().solve(b_);
    sign_.assign(rows_, 1.0);
    for (Eigen::Index i = 0; i < rows_; ++i) sign_[i] = z[i] < 0.0 ? -1.0 : 1.0;
    refactor();
  }

  L1LpResult finish(std::size_t pivots) const {
    L1LpResult r;
    r.pivots = pivots;
    r.x = Eigen::VectorXd::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i) r.x[basis_[i]] = sign_[i] * xB_[i];
    r.lambda = Binv_.transpose() * Eigen::VectorXd::Ones(rows_);
    const double s = (A_.transpose() * r.lambda).cwiseAbs().maxCoeff();
    if (s > 1.0) r.lambda /= s;
    r.support.assign(basis_.begin(), basis_.end());
    std::sort(r.support.begin(), r.support.end());
    r.objective = r.x.lpNorm<1>();
    r.dual_value = b_.dot(r.lambda);
    return r;
  }
};

}  // namespace detail

/// Solves min ||x||_1 s.t. A x = b. A must have full row rank. `warm_start`
/// may name rows(A) columns of A; it is used when they are linearly
/// independent, otherwise a column-pivoted QR picks the starting basis.
inline L1LpResult l1_minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<int>* warm_start = nullptr, std::size_t max_pivots = 0) {
  detail::require(A.rows() == b.size(), "l1_minimize: dimension mismatch");
  detail::require(A.rows() <= A.cols(), "l1_minimize: more rows than columns");
  if (max_pivots == 0) max_pivots = 50 * static_cast<std::size_t>(A.cols() + A.rows()) + 1000;
  detail::L1Simplex s(A, b);
  return s.solve(warm_start, max_pivots);
}

}  // namespace randinfo
