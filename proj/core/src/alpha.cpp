#include "sl/alpha.hpp"

#include <limits>

#include "sl/error.hpp"

namespace sl {

namespace {

void validate(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma, const LabeledSet& labels,
              double lambda) {
  if (!(lambda > 0.0)) {
    throw DataError("lambda must be positive");
  }
  if (sigma.rows() != u.cols() || sigma.cols() != u.cols()) {
    throw DataError("Sigma must be m x m for an n x m U");
  }
  if (labels.rows.size() != labels.y.size()) {
    throw DataError("label rows and values differ in length");
  }
  if (labels.rows.empty()) {
    throw DataError("alpha solve needs at least one labeled row");
  }
  for (auto r : labels.rows) {
    if (r < 0 || r >= u.rows()) {
      throw DataError("labeled row out of range");
    }
  }
}

AlphaSolution solve_system(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  AlphaSolution out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const double tol = 64.0 * std::numeric_limits<double>::epsilon();
  // rcond() skips zero pivots (LDLT solves those as a pseudo-inverse), so the
  // pivot spread is checked as well.
  const bool singular =
      ldlt.info() != Eigen::Success || a.size() == 0 || ldlt.rcond() < tol ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= tol * ldlt.vectorD().cwiseAbs().maxCoeff();
  if (!singular) {
    out.alpha = ldlt.solve(b);
  }
  if (singular || !out.alpha.allFinite()) {
    Eigen::MatrixXd ridged = a;
    ridged.diagonal().array() += 1e-10;
    out.alpha = Eigen::LDLT<Eigen::MatrixXd>(ridged).solve(b);
    out.ridge_applied = true;
    if (!out.alpha.allFinite()) {
      throw NumericError("alpha system is singular even after the ridge fallback");
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd LabeledSet::dense(Eigen::Index n) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(rows[i]) = y[i];
  }
  return out;
}

AlphaSolution solve_alpha(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                          const LabeledSet& labels, double lambda) {
  validate(u, sigma, labels, lambda);
  const auto l = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd gathered(l, u.cols());
  Eigen::VectorXd y(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    gathered.row(i) = u.row(labels.rows[static_cast<std::size_t>(i)]);
    y(i) = labels.y[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd a = sigma;
  a.noalias() += gathered.transpose() * (lambda * gathered);
  const Eigen::VectorXd b = gathered.transpose() * (lambda * y);
  return solve_system(a, b);
}

AlphaSolution solve_alpha(const Eigen::MatrixXd& u, const Eigen::VectorXd& sigma_diag,
                          const LabeledSet& labels, double lambda) {
  return solve_alpha(u, Eigen::MatrixXd(sigma_diag.asDiagonal()), labels, lambda);
}

AlphaSolution solve_alpha_dense(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                                const LabeledSet& labels, double lambda) {
  validate(u, sigma, labels, lambda);
  const Eigen::Index n = u.rows();
  Eigen::MatrixXd big_lambda = Eigen::MatrixXd::Zero(n, n);
  for (auto r : labels.rows) {
    big_lambda(r, r) = lambda;
  }
  const Eigen::VectorXd y = labels.dense(n);
  const Eigen::MatrixXd a = sigma + u.transpose() * big_lambda * u;
  const Eigen::VectorXd b = u.transpose() * big_lambda * y;
  return solve_system(a, b);
}

AlphaSolution solve_alpha_unvectorized(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                                       const LabeledSet& labels, double lambda) {
  validate(u, sigma, labels, lambda);
  const Eigen::Index n = u.rows();
  const Eigen::Index m = u.cols();
  const Eigen::VectorXd y = labels.dense(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (auto r : labels.rows) {
    diag(r) = lambda;
  }
  // (Lambda U) and (Lambda y), one row of Lambda at a time.
  Eigen::MatrixXd lambda_u(n, m);
  Eigen::VectorXd lambda_y(n);
  Eigen::VectorXd row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.setZero();
    row(i) = diag(i);
    for (Eigen::Index k = 0; k < m; ++k) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        acc += row(j) * u(j, k);
      }
      lambda_u(i, k) = acc;
    }
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      acc += row(j) * y(j);
    }
    lambda_y(i) = acc;
  }
  const Eigen::MatrixXd a = sigma + u.transpose() * lambda_u;
  const Eigen::VectorXd b = u.transpose() * lambda_y;
  return solve_system(a, b);
}

Eigen::VectorXd smoothness(const Eigen::MatrixXd& u, const Eigen::VectorXd& alpha) {
  if (u.cols() != alpha.size()) {
    throw DataError("U and alpha dimensions disagree");
  }
  return u * alpha;
}

double alpha_objective(const Eigen::MatrixXd& u, const Eigen::MatrixXd& sigma,
                       const LabeledSet& labels, double lambda, const Eigen::VectorXd& alpha) {
  double value = alpha.dot(sigma * alpha);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double r = u.row(labels.rows[i]).dot(alpha) - labels.y[i];
    value += lambda * r * r;
  }
  return value;
}

}  // namespace sl
