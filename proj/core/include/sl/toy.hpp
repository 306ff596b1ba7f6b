#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sl/alpha.hpp"
#include "sl/smoothness.hpp"

namespace sl {

/// Two isotropic 2-D Gaussians, half the points each.
struct ToyData {
  Eigen::MatrixXd points;  ///< n x 2
  std::vector<int> truth;  ///< 1 for the first Gaussian, 0 otherwise
  LabeledSet labels;       ///< the first `labels_per_class` points of each class
};

ToyData make_two_gaussians(int n, std::uint64_t seed, int labels_per_class = 2);

struct ToyParams {
  int m = 8;
  int bins = 50;
  double lambda = 100.0;
  /// Affinity bandwidth of the dense graph on the raw 2-D points.
  double exact_eps = 0.3;
};

struct ToyRun {
  Eigen::VectorXd f_efn;
  std::optional<Eigen::VectorXd> f_exact;  ///< empty when n exceeds the dense guard
  double seconds_efn = 0.0;
  double seconds_exact = 0.0;
  std::optional<double> agreement;  ///< fraction of equal signs
  double accuracy_efn = 0.0;        ///< against the generating class
};

/// Eigenfunction path: PCA rotation, per-dimension eigenfunctions, alpha solve.
Eigen::VectorXd toy_eigenfunction_path(const ToyData& data, const ToyParams& params,
                                       AlphaPath path = AlphaPath::Optimized);

/// Dense graph Laplacian path with Sigma = U' L U.
Eigen::VectorXd toy_exact_path(const ToyData& data, const ToyParams& params);

ToyRun run_toy(const ToyData& data, const ToyParams& params);

/// x,y,truth,label,f_efn,f_exact
void write_toy_scatter(const ToyData& data, const ToyRun& run, std::ostream& out);

inline constexpr int kBenchSizes[] = {400, 900, 1600, 2500, 3600, 15000, 30000};

struct BenchRow {
  int n = 0;
  std::optional<double> t_exact;
  double t_efn = 0.0;      ///< unvectorized alpha solve
  double t_efn_opt = 0.0;  ///< labeled-rows alpha solve
};

std::vector<BenchRow> run_bench(std::span<const int> sizes, std::uint64_t seed, const ToyParams& params);

/// n,t_exact,t_efn,t_efn_opt with a blank t_exact past the dense guard.
void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out);

}  // namespace sl
