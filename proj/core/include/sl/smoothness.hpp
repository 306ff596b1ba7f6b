#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sl/alpha.hpp"
#include "sl/eigenfunction.hpp"
#include "sl/features.hpp"

namespace sl {

enum class AlphaPath { Optimized, Dense, Unvectorized };

struct SmoothnessParams {
  int m = 100;
  int bins = 50;
  double lambda = 100.0;
  /// Bin-centre kernel bandwidth as a multiple of the bin width.
  double eps_factor = 2.0;
  AlphaPath alpha_path = AlphaPath::Optimized;
  /// Prepend one constant column (sigma = 0) to U. Every per-dimension
  /// constant is dropped during selection, so without it f has no offset and
  /// rows far from all labels sit at f ~ 0 with an arbitrary sign.
  bool intercept = true;
  int jobs = 1;
};

struct SmoothnessSolution {
  Eigen::MatrixXd u;          ///< n x (m + intercept); the constant column comes first
  Eigen::VectorXd sigma;      ///< matching eigenvalues, 0 for the constant
  Eigen::VectorXd alpha;
  Eigen::VectorXd f;
  bool shortfall = false;
  bool ridge_applied = false;
};

/// Eigenfunctions of every column of `data` (assumed decorrelated), the m
/// smallest interpolated back to the rows, and the labeled alpha solve.
SmoothnessSolution laplacian_smoothness(const Eigen::MatrixXd& data, const LabeledSet& labels,
                                        const SmoothnessParams& params);

/// Eigenfunctions of each column, solved independently.
std::vector<std::vector<Eigenfunction>> column_eigenfunctions(const Eigen::MatrixXd& data,
                                                              const SmoothnessParams& params);

struct MultiscaleResult {
  Eigen::VectorXd f;                  ///< mean of the per-scale fields
  std::vector<Eigen::VectorXd> per_scale;
  std::vector<double> used_scales;
  std::vector<std::string> warnings;
};

/// For each scale: assemble features, PCA-rotate, smooth; returns the mean.
/// Scales whose features degenerate are skipped with a warning.
MultiscaleResult multiscale_smoothness(const ImageContext& ctx, std::span<const PivotCues> batches,
                                       std::span<const double> scales, const LabeledSet& labels,
                                       const SmoothnessParams& params);

}  // namespace sl
