#include <random>

#include <benchmark/benchmark.h>

#include "sl/alpha.hpp"
#include "sl/eigenfunction.hpp"
#include "sl/geodesic.hpp"
#include "sl/segmenter.hpp"

namespace {

struct Instance {
  Eigen::MatrixXd u;
  Eigen::MatrixXd sigma;
  sl::LabeledSet labels;
};

Instance make_instance(int n, int m, int labeled) {
  std::mt19937_64 rng(n * 31 + m);
  Instance in;
  in.u = Eigen::MatrixXd::Random(n, m);
  in.sigma = Eigen::VectorXd::LinSpaced(m, 0.0, 1.0).asDiagonal();
  for (int i = 0; i < labeled; ++i) {
    in.labels.rows.push_back(static_cast<Eigen::Index>(rng() % n));
    in.labels.y.push_back(i % 2 ? 1.0 : -1.0);
  }
  return in;
}

// Noisy disk on a flat background, with a foreground stroke through the
// centre and a background stroke along the top.
std::pair<sl::ImageRGB, sl::ScribbleMap> disk_case(int w, int h) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 5.0);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  sl::ScribbleMap s(w, h, sl::Label::Unlabeled);
  const double r = 0.3 * std::min(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool in = std::hypot(x - w / 2.0, y - h / 2.0) <= r;
      for (int c = 0; c < 3; ++c) {
        const double base = in ? 60 + 70 * c : 200 - 60 * c;
        data[3 * (static_cast<std::size_t>(y) * w + x) + c] =
            static_cast<std::uint8_t>(std::clamp(base + noise(rng), 0.0, 255.0));
      }
      if (y == h / 2 && std::abs(x - w / 2) < r / 2) {
        s.at({x, y}) = sl::Label::Foreground;
      } else if (y == 3 && x > 3 && x < w - 3) {
        s.at({x, y}) = sl::Label::Background;
      }
    }
  }
  return {sl::ImageRGB(w, h, std::move(data)), s};
}

void BM_AlphaOptimized(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), 20, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::solve_alpha(in.u, in.sigma, in.labels, 100.0));
  }
}
BENCHMARK(BM_AlphaOptimized)->Arg(3600)->Arg(30000)->Unit(benchmark::kMicrosecond);

void BM_AlphaUnvectorized(benchmark::State& state) {
  const auto in = make_instance(static_cast<int>(state.range(0)), 20, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::solve_alpha_unvectorized(in.u, in.sigma, in.labels, 100.0));
  }
}
BENCHMARK(BM_AlphaUnvectorized)->Arg(3600)->Unit(benchmark::kMillisecond);

void BM_SolveEigenfunctions(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> column(10000);
  for (double& v : column) {
    v = g(rng);
  }
  const int bins = static_cast<int>(state.range(0));
  const auto hist = sl::histogram_density(column, bins);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::solve_eigenfunctions(hist, 3.0 * hist.bin_width(), bins));
  }
}
BENCHMARK(BM_SolveEigenfunctions)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_GeodesicField(benchmark::State& state) {
  const int w = 481;
  const int h = 321;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<double> intensity(static_cast<std::size_t>(w) * h);
  for (double& v : intensity) {
    v = u(rng);
  }
  const sl::GeodesicField field(w, h, intensity, 0.5);
  const sl::Pixel seed{w / 2, h / 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.distances({&seed, 1}));
  }
}
BENCHMARK(BM_GeodesicField)->Unit(benchmark::kMillisecond);

void BM_SegmentSinglePass(benchmark::State& state) {
  const auto [img, scribbles] = disk_case(481, 321);
  const sl::SegmenterParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sl::segment_single_pass(img, scribbles, params));
  }
}
BENCHMARK(BM_SegmentSinglePass)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
