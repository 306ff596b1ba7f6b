#include "sl/smoothness.hpp"

#include <algorithm>
#include <sstream>

#include "sl/error.hpp"
#include "sl/parallel.hpp"
#include "sl/pca.hpp"

namespace sl {

std::vector<std::vector<Eigenfunction>> column_eigenfunctions(const Eigen::MatrixXd& data,
                                                              const SmoothnessParams& params) {
  const auto dims = static_cast<std::size_t>(data.cols());
  std::vector<std::vector<Eigenfunction>> per_dim(dims);
  const int count = std::min(params.bins, params.m + 1);
  parallel_for(dims, params.jobs, [&](std::size_t j) {
    const auto col = data.col(static_cast<Eigen::Index>(j));
    const DensityHistogram hist =
        histogram_density(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                          params.bins);
    if (hist.degenerate) {
      return;
    }
    per_dim[j] = solve_eigenfunctions(hist, params.eps_factor * hist.bin_width(), count,
                                      static_cast<int>(j));
  });
  return per_dim;
}

SmoothnessSolution laplacian_smoothness(const Eigen::MatrixXd& data, const LabeledSet& labels,
                                        const SmoothnessParams& params) {
  if (params.m < 1 || params.bins < 2 || !(params.lambda > 0.0) || !(params.eps_factor > 0.0)) {
    throw DataError("invalid smoothness parameters");
  }
  const auto per_dim = column_eigenfunctions(data, params);
  const EigenfunctionSet set = select_smallest(per_dim, params.m);
  if (set.functions.empty()) {
    throw DegenerateDataError("no non-constant eigenfunctions available");
  }

  SmoothnessSolution out;
  out.shortfall = set.shortfall;
  const Eigen::Index offset = params.intercept ? 1 : 0;
  const auto m = static_cast<Eigen::Index>(set.functions.size());
  out.u.resize(data.rows(), m + offset);
  out.sigma.resize(m + offset);
  if (params.intercept) {
    out.u.col(0).setOnes();
    out.sigma(0) = 0.0;
  }
  out.u.rightCols(m) = interpolate_eigenvectors(set, data);
  for (Eigen::Index k = 0; k < m; ++k) {
    out.sigma(offset + k) = set.functions[static_cast<std::size_t>(k)].eigenvalue;
  }
  const Eigen::MatrixXd sigma = out.sigma.asDiagonal();
  AlphaSolution a;
  switch (params.alpha_path) {
    case AlphaPath::Optimized:
      a = solve_alpha(out.u, sigma, labels, params.lambda);
      break;
    case AlphaPath::Dense:
      a = solve_alpha_dense(out.u, sigma, labels, params.lambda);
      break;
    case AlphaPath::Unvectorized:
      a = solve_alpha_unvectorized(out.u, sigma, labels, params.lambda);
      break;
  }
  out.alpha = std::move(a.alpha);
  out.ridge_applied = a.ridge_applied;
  out.f = smoothness(out.u, out.alpha);
  return out;
}

MultiscaleResult multiscale_smoothness(const ImageContext& ctx, std::span<const PivotCues> batches,
                                       std::span<const double> scales, const LabeledSet& labels,
                                       const SmoothnessParams& params) {
  if (scales.empty()) {
    throw DataError("at least one scale is required");
  }
  MultiscaleResult out;
  out.f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.pixel_count()));
  for (double scale : scales) {
    const FeatureMatrix fm = assemble_features(ctx, batches, scale);
    SmoothnessSolution sol;
    try {
      const auto rotated = pca_rotate(fm.values);
      sol = laplacian_smoothness(rotated.first, labels, params);
    } catch (const DegenerateDataError& e) {
      std::ostringstream msg;
      msg << "scale " << scale << " skipped: " << e.what();
      out.warnings.push_back(msg.str());
      continue;
    }
    if (sol.shortfall) {
      std::ostringstream msg;
      msg << "scale " << scale << ": only " << sol.u.cols() - (params.intercept ? 1 : 0)
          << " eigenfunctions available";
      out.warnings.push_back(msg.str());
    }
    if (sol.ridge_applied) {
      std::ostringstream msg;
      msg << "scale " << scale << ": singular alpha system, ridge applied";
      out.warnings.push_back(msg.str());
    }
    out.f += sol.f;
    out.per_scale.push_back(std::move(sol.f));
    out.used_scales.push_back(scale);
  }
  if (out.per_scale.empty()) {
    throw DegenerateDataError("every scale degenerated");
  }
  out.f /= static_cast<double>(out.per_scale.size());
  return out;
}

}  // namespace sl
