#include "sl/pca.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "sl/error.hpp"

namespace sl {

std::pair<Eigen::MatrixXd, PcaBasis> pca_rotate(const Eigen::MatrixXd& data, PcaRetain retain) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (n < 2 || d < 1) {
    throw DataError("PCA needs at least two rows and one column");
  }
  if (!data.allFinite()) {
    throw DataError("PCA input contains non-finite values");
  }
  if (!(retain.fraction > 0.0 && retain.fraction <= 1.0)) {
    throw DataError("PCA retain fraction must lie in (0,1]");
  }

  PcaBasis basis;
  basis.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centred = data.rowwise() - basis.mean.transpose();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw NumericError("PCA eigen-decomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd values = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();

  const double top = values(0);
  if (!(top > 0.0)) {
    throw DegenerateDataError("PCA input has zero variance (all rows identical)");
  }
  const double floor = top * 1e-12 * static_cast<double>(d);
  Eigen::Index keep = 0;
  while (keep < d && values(keep) > floor) {
    ++keep;
  }
  if (retain.fraction < 1.0) {
    const double total = values.head(keep).sum();
    double acc = 0.0;
    Eigen::Index prefix = 0;
    while (prefix < keep) {
      acc += values(prefix++);
      if (acc >= retain.fraction * total) {
        break;
      }
    }
    keep = prefix;
  }
  if (retain.count) {
    keep = std::min<Eigen::Index>(keep, std::max(1, *retain.count));
  }

  basis.components = vectors.leftCols(keep).transpose();
  for (Eigen::Index r = 0; r < keep; ++r) {
    Eigen::Index arg = 0;
    basis.components.row(r).cwiseAbs().maxCoeff(&arg);
    if (basis.components(r, arg) < 0.0) {
      basis.components.row(r) *= -1.0;
    }
  }
  basis.variances = values.head(keep);
  Eigen::MatrixXd projected = centred * basis.components.transpose();
  return {std::move(projected), std::move(basis)};
}

}  // namespace sl
