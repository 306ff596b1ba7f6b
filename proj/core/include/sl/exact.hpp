#pragma once

#include <Eigen/Dense>

namespace sl {

inline constexpr Eigen::Index kExactMaxPoints = 5000;

struct ExactEigenvectors {
  Eigen::MatrixXd vectors;      ///< n x k, orthonormal columns
  Eigen::VectorXd eigenvalues;  ///< k, ascending
  Eigen::MatrixXd sigma;        ///< U' L U, computed from the dense L
};

/// k smallest eigenpairs of L = D - W with W_ij = exp(-|x_i - x_j|^2 / 2 eps^2)
/// over the rows of `points`. Dense; rejects more than kExactMaxPoints rows.
ExactEigenvectors solve_exact_eigenvectors(const Eigen::MatrixXd& points, double eps, int k);

}  // namespace sl
