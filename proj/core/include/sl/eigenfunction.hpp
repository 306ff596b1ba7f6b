#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sl {

struct DensityHistogram {
  std::vector<double> bin_centers;  ///< strictly increasing
  std::vector<double> probs;        ///< sums to 1
  /// Set when the column is constant; such a dimension carries no
  /// eigenfunctions and is skipped.
  bool degenerate = false;

  int bins() const { return static_cast<int>(bin_centers.size()); }
  double bin_width() const;
};

/// `bins` equal-width bins spanning [min, max] of the column.
DensityHistogram histogram_density(std::span<const double> column, int bins);

struct Eigenfunction {
  int dim_index = 0;
  int index_in_dim = 0;
  std::vector<double> bin_centers;
  std::vector<double> values;  ///< g at each bin centre
  double eigenvalue = 0.0;     ///< sigma
};

/// Solves (D~ - P W~ P) g = sigma P D^ g on the histogram bins, with
/// W~ = exp(-(c_i - c_j)^2 / 2 eps^2), P = diag(probs), D~ the column sums of
/// P W~ P and D^ the column sums of P W~. Returns the `count` smallest
/// eigenpairs, ascending, each normalised to g' P D^ g = 1 with its first
/// nonzero entry positive. The first pair is always the constant function
/// with sigma = 0. Empty bins are floored at 1e-10 / b.
std::vector<Eigenfunction> solve_eigenfunctions(const DensityHistogram& hist, double eps, int count,
                                                int dim_index = 0);

/// Max-norm residual of the generalized problem for one eigenfunction,
/// evaluated with the same flooring as the solver.
double eigenfunction_residual(const DensityHistogram& hist, double eps, const Eigenfunction& ef);

struct EigenfunctionSet {
  std::vector<Eigenfunction> functions;  ///< ascending sigma
  bool shortfall = false;                ///< fewer than m non-constant functions were available
};

/// Merges every dimension's eigenfunctions, drops the constant ones
/// (max |g - mean g| < 1e-6) and keeps the m smallest by
/// (sigma, dim_index, index_in_dim).
EigenfunctionSet select_smallest(std::span<const std::vector<Eigenfunction>> per_dim, int m);

/// Linear interpolation of each eigenfunction at every row's value in its
/// dimension; values beyond the outer bin centres clamp to the end values.
Eigen::MatrixXd interpolate_eigenvectors(const EigenfunctionSet& efs, const Eigen::MatrixXd& features);

double interpolate_eigenfunction(const Eigenfunction& ef, double value);

}  // namespace sl
