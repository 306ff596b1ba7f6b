#include "sl/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "sl/error.hpp"

namespace sl {

double DensityHistogram::bin_width() const {
  return bin_centers.size() >= 2 ? bin_centers[1] - bin_centers[0] : 0.0;
}

DensityHistogram histogram_density(std::span<const double> column, int bins) {
  if (column.size() < 2) {
    throw DataError("histogram needs at least two samples");
  }
  if (bins < 2) {
    throw DataError("histogram needs at least two bins");
  }
  double lo = column[0];
  double hi = column[0];
  for (double v : column) {
    if (!std::isfinite(v)) {
      throw DataError("histogram input contains non-finite values");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  DensityHistogram h;
  if (!(hi > lo)) {
    h.degenerate = true;
    return h;
  }
  const double width = (hi - lo) / bins;
  h.bin_centers.resize(bins);
  h.probs.assign(bins, 0.0);
  for (int b = 0; b < bins; ++b) {
    h.bin_centers[b] = lo + (b + 0.5) * width;
  }
  std::vector<std::size_t> counts(bins, 0);
  for (double v : column) {
    const auto b = std::min(static_cast<int>((v - lo) / width), bins - 1);
    ++counts[b];
  }
  const double n = static_cast<double>(column.size());
  for (int b = 0; b < bins; ++b) {
    h.probs[b] = counts[b] / n;
  }
  return h;
}

namespace {

struct DiscreteProblem {
  Eigen::VectorXd p;          // floored, normalised probabilities
  Eigen::MatrixXd affinity;   // P W~ P
  Eigen::VectorXd d_tilde;    // column sums of P W~ P
  Eigen::VectorXd mass;       // diagonal of P D^
};

DiscreteProblem build_problem(const DensityHistogram& hist, double eps) {
  if (hist.degenerate || hist.bins() < 2) {
    throw DataError("eigenfunctions need a non-degenerate histogram with at least two bins");
  }
  if (!(eps > 0.0)) {
    throw DataError("eigenfunction bandwidth must be positive");
  }
  const int b = hist.bins();
  DiscreteProblem pr;
  pr.p.resize(b);
  double total = 0.0;
  for (int i = 0; i < b; ++i) {
    if (!(hist.probs[i] >= 0.0)) {
      throw DataError("histogram probabilities must be nonnegative");
    }
    total += hist.probs[i];
  }
  if (!(total > 0.0)) {
    throw DataError("histogram has no mass");
  }
  const double floor = 1e-10 / b;
  for (int i = 0; i < b; ++i) {
    pr.p(i) = std::max(hist.probs[i] / total, floor);
  }
  Eigen::MatrixXd w(b, b);
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) {
      const double d = hist.bin_centers[i] - hist.bin_centers[j];
      w(i, j) = std::exp(-d * d / (2.0 * eps * eps));
    }
  }
  const Eigen::MatrixXd pw = pr.p.asDiagonal() * w;
  pr.affinity = pw * pr.p.asDiagonal();
  pr.d_tilde = pr.affinity.colwise().sum().transpose();
  const Eigen::VectorXd d_hat = pw.colwise().sum().transpose();
  pr.mass = pr.p.cwiseProduct(d_hat);
  return pr;
}

}  // namespace

std::vector<Eigenfunction> solve_eigenfunctions(const DensityHistogram& hist, double eps, int count,
                                                int dim_index) {
  const DiscreteProblem pr = build_problem(hist, eps);
  const int b = hist.bins();
  if (count < 1 || count > b) {
    throw DataError("eigenfunction count must lie in [1, bins]");
  }

  // Symmetrise with g = (P D^)^{-1/2} h.
  const Eigen::VectorXd inv_sqrt = pr.mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd lap = -pr.affinity;
  lap.diagonal() += pr.d_tilde;
  const Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (sym + sym.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenfunction solve failed");
  }
  Eigen::MatrixXd h = solver.eigenvectors();
  Eigen::VectorXd sigma = solver.eigenvalues();

  // The null space always contains the constant function, h0 ~ (P D^)^{1/2} 1.
  // Near-degenerate null spaces (well separated modes) come back as arbitrary
  // rotations, so pin h0 exactly and re-orthogonalise the rest of the cluster.
  const double tol = 1e-10 * std::max(1.0, sigma.cwiseAbs().maxCoeff());
  int cluster = 1;
  while (cluster < b && sigma(cluster) < tol) {
    ++cluster;
  }
  {
    Eigen::MatrixXd basis(b, cluster);
    basis.col(0) = pr.mass.cwiseSqrt().normalized();
    int filled = 1;
    for (int c = 0; c < b && filled < cluster; ++c) {
      Eigen::VectorXd v = h.col(c);
      for (int r = 0; r < filled; ++r) {
        v -= basis.col(r).dot(v) * basis.col(r);
      }
      const double norm = v.norm();
      if (norm > 1e-6) {
        basis.col(filled++) = v / norm;
      }
    }
    for (int c = 0; c < cluster; ++c) {
      h.col(c) = basis.col(c);
      sigma(c) = c == 0 ? 0.0 : std::max(0.0, basis.col(c).dot(sym * basis.col(c)));
    }
  }

  std::vector<Eigenfunction> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    Eigenfunction ef;
    ef.dim_index = dim_index;
    ef.index_in_dim = c;
    ef.bin_centers = hist.bin_centers;
    ef.eigenvalue = sigma(c);
    Eigen::VectorXd g = inv_sqrt.cwiseProduct(h.col(c));
    const double peak = g.cwiseAbs().maxCoeff();
    for (int i = 0; i < b; ++i) {
      if (std::abs(g(i)) > 1e-12 * peak) {
        if (g(i) < 0.0) {
          g = -g;
        }
        break;
      }
    }
    ef.values.assign(g.data(), g.data() + b);
    out.push_back(std::move(ef));
  }
  return out;
}

double eigenfunction_residual(const DensityHistogram& hist, double eps, const Eigenfunction& ef) {
  const DiscreteProblem pr = build_problem(hist, eps);
  const Eigen::Map<const Eigen::VectorXd> g(ef.values.data(), static_cast<Eigen::Index>(ef.values.size()));
  const Eigen::VectorXd lhs = pr.d_tilde.cwiseProduct(g) - pr.affinity * g;
  const Eigen::VectorXd rhs = ef.eigenvalue * pr.mass.cwiseProduct(g);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

EigenfunctionSet select_smallest(std::span<const std::vector<Eigenfunction>> per_dim, int m) {
  if (m < 1) {
    throw DataError("eigenfunction selection needs m >= 1");
  }
  std::vector<const Eigenfunction*> candidates;
  for (const auto& dim : per_dim) {
    for (const auto& ef : dim) {
      double mean = 0.0;
      for (double v : ef.values) {
        mean += v;
      }
      mean /= static_cast<double>(ef.values.size());
      double spread = 0.0;
      for (double v : ef.values) {
        spread = std::max(spread, std::abs(v - mean));
      }
      if (spread >= 1e-6) {
        candidates.push_back(&ef);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Eigenfunction* a, const Eigenfunction* b) {
    return std::tie(a->eigenvalue, a->dim_index, a->index_in_dim) <
           std::tie(b->eigenvalue, b->dim_index, b->index_in_dim);
  });
  EigenfunctionSet set;
  set.shortfall = candidates.size() < static_cast<std::size_t>(m);
  const std::size_t take = std::min(candidates.size(), static_cast<std::size_t>(m));
  set.functions.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    set.functions.push_back(*candidates[i]);
  }
  return set;
}

double interpolate_eigenfunction(const Eigenfunction& ef, double value) {
  const auto& c = ef.bin_centers;
  const auto& g = ef.values;
  const std::size_t b = c.size();
  if (value <= c.front()) {
    return g.front();
  }
  if (value >= c.back()) {
    return g.back();
  }
  const double width = (c.back() - c.front()) / static_cast<double>(b - 1);
  auto i = static_cast<std::size_t>((value - c.front()) / width);
  i = std::min(i, b - 2);
  // Guard against rounding in the index estimate.
  if (value < c[i]) {
    --i;
  } else if (value > c[i + 1]) {
    ++i;
  }
  const double t = (value - c[i]) / (c[i + 1] - c[i]);
  return g[i] + t * (g[i + 1] - g[i]);
}

Eigen::MatrixXd interpolate_eigenvectors(const EigenfunctionSet& efs, const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows();
  const auto m = static_cast<Eigen::Index>(efs.functions.size());
  Eigen::MatrixXd u(n, m);
  // Functions of one dimension share its bin centres, so the bin lookup is
  // done once per row for the whole group.
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  std::vector<Eigen::Index> group;
  std::vector<double> t(static_cast<std::size_t>(n));
  std::vector<std::size_t> bin(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < m; ++k) {
    if (done[static_cast<std::size_t>(k)]) {
      continue;
    }
    const Eigenfunction& ef = efs.functions[static_cast<std::size_t>(k)];
    if (ef.dim_index < 0 || ef.dim_index >= features.cols()) {
      throw DataError("eigenfunction dimension index out of range");
    }
    group.clear();
    for (Eigen::Index j = k; j < m; ++j) {
      const Eigenfunction& other = efs.functions[static_cast<std::size_t>(j)];
      if (!done[static_cast<std::size_t>(j)] && other.dim_index == ef.dim_index &&
          other.bin_centers == ef.bin_centers) {
        group.push_back(j);
        done[static_cast<std::size_t>(j)] = true;
      }
    }
    const auto& c = ef.bin_centers;
    const std::size_t b = c.size();
    const double width = b > 1 ? (c.back() - c.front()) / static_cast<double>(b - 1) : 1.0;
    const auto col = features.col(ef.dim_index);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double value = col(i);
      std::size_t lo = 0;
      double frac = 0.0;
      if (b == 1 || value <= c.front()) {
        lo = 0;
      } else if (value >= c.back()) {
        lo = b - 2;
        frac = 1.0;
      } else {
        lo = std::min(static_cast<std::size_t>((value - c.front()) / width), b - 2);
        if (value < c[lo]) {
          --lo;
        } else if (value > c[lo + 1]) {
          ++lo;
        }
        frac = (value - c[lo]) / (c[lo + 1] - c[lo]);
      }
      bin[static_cast<std::size_t>(i)] = lo;
      t[static_cast<std::size_t>(i)] = frac;
    }
    for (Eigen::Index j : group) {
      const auto& g = efs.functions[static_cast<std::size_t>(j)].values;
      for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t lo = bin[static_cast<std::size_t>(i)];
        if (b == 1) {
          u(i, j) = g[0];
          continue;
        }
        const double f = t[static_cast<std::size_t>(i)];
        // Exact end values outside the centre range.
        u(i, j) = f == 1.0 ? g[lo + 1] : g[lo] + f * (g[lo + 1] - g[lo]);
      }
    }
  }
  return u;
}

}  // namespace sl
