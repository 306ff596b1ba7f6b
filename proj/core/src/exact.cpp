#include "sl/exact.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "sl/error.hpp"

namespace sl {

ExactEigenvectors solve_exact_eigenvectors(const Eigen::MatrixXd& points, double eps, int k) {
  const Eigen::Index n = points.rows();
  if (n > kExactMaxPoints) {
    throw DataError("exact eigenvector path refuses n = " + std::to_string(n) + " (limit " +
                    std::to_string(kExactMaxPoints) + ")");
  }
  if (k < 1 || k >= n) {
    throw DataError("exact eigenvector count must satisfy 1 <= k < n");
  }
  if (!(eps > 0.0)) {
    throw DataError("exact affinity bandwidth must be positive");
  }

  // Column-major dense Laplacian.
  Eigen::MatrixXd lap(n, n);
  const Eigen::VectorXd sq = points.rowwise().squaredNorm();
  lap.noalias() = -2.0 * points * points.transpose();
  lap.colwise() += sq;
  lap.rowwise() += sq.transpose();
  const double scale = -1.0 / (2.0 * eps * eps);
  lap = (lap.cwiseMax(0.0) * scale).array().exp().matrix();
  const Eigen::VectorXd degree = lap.rowwise().sum();
  lap = -lap;
  lap.diagonal() += degree;

  Eigen::MatrixXd work = lap;
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), work.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, 1, static_cast<lapack_int>(k), 0.0, &found, w.data(),
      z.data(), static_cast<lapack_int>(n), support.data());
  if (info != 0 || found != k) {
    throw NumericError("dense Laplacian eigen-solve failed (info " + std::to_string(info) + ")");
  }

  ExactEigenvectors out;
  out.vectors = std::move(z);
  out.eigenvalues = Eigen::Map<const Eigen::VectorXd>(w.data(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(out.vectors(r, c)) > 1e-12) {
        arg = r;
        break;
      }
    }
    if (out.vectors(arg, c) < 0.0) {
      out.vectors.col(c) *= -1.0;
    }
  }
  out.sigma = out.vectors.transpose() * lap * out.vectors;
  return out;
}

}  // namespace sl
