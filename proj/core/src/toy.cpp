#include "sl/toy.hpp"

#include <chrono>
#include <ostream>
#include <random>

#include "sl/error.hpp"
#include "sl/exact.hpp"
#include "sl/pca.hpp"

namespace sl {

namespace {

template <typename Fn>
double time_seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ToyData make_two_gaussians(int n, std::uint64_t seed, int labels_per_class) {
  if (n < 10) {
    throw DataError("toy needs n >= 10");
  }
  if (labels_per_class < 1 || 2 * labels_per_class > n) {
    throw DataError("invalid labels per class");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.6);
  ToyData data;
  data.points.resize(n, 2);
  data.truth.resize(static_cast<std::size_t>(n));
  const int first = n / 2;
  for (int i = 0; i < n; ++i) {
    const int cls = i < first ? 1 : 0;
    data.truth[static_cast<std::size_t>(i)] = cls;
    data.points(i, 0) = (cls ? -1.5 : 1.5) + noise(rng);
    data.points(i, 1) = noise(rng);
  }
  for (int j = 0; j < labels_per_class; ++j) {
    data.labels.rows.push_back(j);
    data.labels.y.push_back(1.0);
  }
  for (int j = 0; j < labels_per_class; ++j) {
    data.labels.rows.push_back(first + j);
    data.labels.y.push_back(-1.0);
  }
  return data;
}

Eigen::VectorXd toy_eigenfunction_path(const ToyData& data, const ToyParams& params, AlphaPath path) {
  SmoothnessParams sp;
  sp.m = params.m;
  sp.bins = params.bins;
  sp.lambda = params.lambda;
  sp.alpha_path = path;
  const auto rotated = pca_rotate(data.points);
  return laplacian_smoothness(rotated.first, data.labels, sp).f;
}

Eigen::VectorXd toy_exact_path(const ToyData& data, const ToyParams& params) {
  const ExactEigenvectors ex = solve_exact_eigenvectors(data.points, params.exact_eps, params.m);
  const AlphaSolution a = solve_alpha(ex.vectors, ex.sigma, data.labels, params.lambda);
  return smoothness(ex.vectors, a.alpha);
}

ToyRun run_toy(const ToyData& data, const ToyParams& params) {
  ToyRun run;
  run.seconds_efn = time_seconds([&] { run.f_efn = toy_eigenfunction_path(data, params); });
  const auto n = data.points.rows();
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    correct += (run.f_efn(i) > 0.0) == (data.truth[static_cast<std::size_t>(i)] == 1);
  }
  run.accuracy_efn = static_cast<double>(correct) / static_cast<double>(n);
  if (n <= kExactMaxPoints) {
    run.seconds_exact = time_seconds([&] { run.f_exact = toy_exact_path(data, params); });
    std::size_t same = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      same += (run.f_efn(i) > 0.0) == ((*run.f_exact)(i) > 0.0);
    }
    run.agreement = static_cast<double>(same) / static_cast<double>(n);
  }
  return run;
}

void write_toy_scatter(const ToyData& data, const ToyRun& run, std::ostream& out) {
  const auto n = data.points.rows();
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    label[static_cast<std::size_t>(data.labels.rows[i])] = data.labels.y[i] > 0 ? 1 : -1;
  }
  const auto precision = out.precision(10);
  out << "x,y,truth,label,f_efn,f_exact\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(i);
    out << data.points(i, 0) << ',' << data.points(i, 1) << ',' << data.truth[s] << ',' << label[s]
        << ',' << run.f_efn(i) << ',';
    if (run.f_exact) {
      out << (*run.f_exact)(i);
    }
    out << '\n';
  }
  out.precision(precision);
}

std::vector<BenchRow> run_bench(std::span<const int> sizes, std::uint64_t seed, const ToyParams& params) {
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    const ToyData data = make_two_gaussians(n, seed);
    BenchRow row;
    row.n = n;
    if (n <= kExactMaxPoints) {
      row.t_exact = time_seconds([&] { toy_exact_path(data, params); });
    }
    row.t_efn = time_seconds([&] { toy_eigenfunction_path(data, params, AlphaPath::Unvectorized); });
    row.t_efn_opt = time_seconds([&] { toy_eigenfunction_path(data, params, AlphaPath::Optimized); });
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::span<const BenchRow> rows, std::ostream& out) {
  const auto precision = out.precision(6);
  out << "n,t_exact,t_efn,t_efn_opt\n";
  for (const auto& r : rows) {
    out << r.n << ',';
    if (r.t_exact) {
      out << *r.t_exact;
    }
    out << ',' << r.t_efn << ',' << r.t_efn_opt << '\n';
  }
  out.precision(precision);
}

}  // namespace sl
