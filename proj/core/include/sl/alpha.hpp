#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sl {

/// Sparse label vector: y[i] (+1 foreground, -1 background) at row rows[i].
struct LabeledSet {
  std::vector<Eigen::Index> rows;
  std::vector<double> y;

  std::size_t size() const { return rows.size(); }
  /// Dense n-vector with zeros on unlabeled rows.
  Eigen::VectorXd dense(Eigen::Index n) const;
};

struct AlphaSolution {
  Eigen::VectorXd alpha;
  bool ridge_applied = false;  ///< system was singular; solved with a 1e-10 ridge
};

/// alpha = (Sigma + U' Lambda U)^{-1} U' Lambda y with Lambda = lambda on the
/// labeled rows. Only the labeled rows of U are touched.
AlphaSolution solve_alpha(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                          const LabeledSet& labels, double lambda);
AlphaSolution solve_alpha(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma_diag,
                          const LabeledSet& labels, double lambda);

/// Same system built with an explicit n x n Lambda. Reference path for small n.
AlphaSolution solve_alpha_dense(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                                const LabeledSet& labels, double lambda);

/// Same system with Lambda streamed one dense row at a time (O(n^2 m)).
/// Timing baseline only.
AlphaSolution solve_alpha_unvectorized(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                                       const LabeledSet& labels, double lambda);

/// f = U alpha.
Eigen::VectorXd smoothness(const Eigen::MatrixXd& u, const Eigen::VectorXd& alpha);

/// alpha' Sigma alpha + (U alpha - y)' Lambda (U alpha - y).
double alpha_objective(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                       const LabeledSet& labels, double lambda, const Eigen::VectorXd& alpha);

}  // namespace sl
