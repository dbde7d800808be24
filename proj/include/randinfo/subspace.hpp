#pragma once

// Orthonormal bases for the row space and kernel of a dense matrix, from
// one column-pivoted QR of G'. Columns get a fixed sign so that results
// are reproducible across calls.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "randinfo/errors.hpp"

namespace randinfo {

/// Gaussian (or any dense) information matrix: n rows (measurements), m columns.
using InfoMatrix = Eigen::MatrixXd;

namespace detail {

struct SubspaceSplit {
  Eigen::MatrixXd row_space;  // m x rank
  Eigen::MatrixXd kernel;     // m x (m - rank)
};

inline void fix_signs(Eigen::MatrixXd& B) {
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
      if (std::abs(B(r, c)) > 1e-12) {
        if (B(r, c) < 0.0) B.col(c) *= -1.0;
        break;
      }
    }
  }
}

// With want_kernel = false only the row space is formed (m x rank work
// instead of m x m).
inline SubspaceSplit split_subspaces(const InfoMatrix& G, bool want_kernel = true) {
  const Eigen::Index m = G.cols();
  SubspaceSplit out;
  if (G.rows() == 0) {
    out.row_space = Eigen::MatrixXd(m, 0);
    out.kernel = Eigen::MatrixXd::Identity(m, m);
    return out;
  }
  detail::require(G.allFinite(), "information matrix has non-finite entries");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G.transpose());
  qr.setThreshold(1e-12);
  const Eigen::Index r = qr.rank();
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, want_kernel ? m : r);
  out.row_space = Q.leftCols(r);
  out.kernel = want_kernel ? Eigen::MatrixXd(Q.rightCols(m - r)) : Eigen::MatrixXd(m, 0);
  fix_signs(out.row_space);
  fix_signs(out.kernel);
  return out;
}

}  // namespace detail

/// Orthonormal basis (m x rank) of the span of the rows of G.
inline Eigen::MatrixXd row_space_basis(const InfoMatrix& G) { return detail::split_subspaces(G, false).row_space; }

/// Orthonormal basis of ker G, m x (m - n). Requires rank(G) = n.
inline Eigen::MatrixXd kernel_basis(const InfoMatrix& G) {
  detail::SubspaceSplit s = detail::split_subspaces(G);
  if (s.row_space.cols() != G.rows())
    throw InvalidArgument("kernel_basis: matrix has rank " + std::to_string(s.row_space.cols()) + " < " +
                          std::to_string(G.rows()) + " rows");
  return std::move(s.kernel);
}

}  // namespace randinfo
