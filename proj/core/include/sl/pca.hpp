#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace sl {

struct PcaBasis {
  Eigen::VectorXd mean;        ///< d
  Eigen::MatrixXd components;  ///< d' x d, orthonormal rows
  Eigen::VectorXd variances;   ///< d', nonincreasing
};

/// How many principal components to keep. The default keeps every component
/// with nonzero variance (decorrelation only, no reduction).
struct PcaRetain {
  double fraction = 1.0;          ///< smallest prefix explaining >= fraction of the variance
  std::optional<int> count;       ///< hard cap on the number of components
};

/// Centres the rows and projects them on the principal axes. Each component
/// is sign-normalised so that its largest-magnitude entry is positive.
/// Throws DegenerateDataError when every row is identical, DataError when
/// there are fewer than two rows.
std::pair<Eigen::MatrixXd, PcaBasis> pca_rotate(const Eigen::MatrixXd& data, PcaRetain retain = {});

}  // namespace sl
