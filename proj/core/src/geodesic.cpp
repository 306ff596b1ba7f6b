#include "sl/geodesic.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <utility>

#include "sl/color.hpp"
#include "sl/error.hpp"

namespace sl {

namespace {

// E, SE, S, SW followed by their reverses W, NW, N, NE.
constexpr int kStepDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kStepDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

// Monotone priority queue for Dijkstra. Nonnegative doubles order like their
// bit patterns, so entries are bucketed by the highest bit in which their key
// differs from the last popped key. Stale entries are left in place and
// skipped by the caller.
class RadixHeap {
 public:
  bool empty() const { return size_ == 0; }

  void push(double key, std::uint32_t v) {
    const auto bits = std::bit_cast<std::uint64_t>(key);
    buckets_[bucket_of(bits)].push_back({bits, v});
    ++size_;
  }

  std::pair<double, std::uint32_t> pop() {
    if (buckets_[0].empty()) {
      std::size_t i = 1;
      while (buckets_[i].empty()) {
        ++i;
      }
      auto& from = buckets_[i];
      last_ = std::min_element(from.begin(), from.end(), [](const Entry& x, const Entry& y) {
                return x.key < y.key;
              })->key;
      for (const Entry& e : from) {
        buckets_[bucket_of(e.key)].push_back(e);
      }
      from.clear();
    }
    const Entry e = buckets_[0].back();
    buckets_[0].pop_back();
    --size_;
    return {std::bit_cast<double>(e.key), e.v};
  }

 private:
  struct Entry {
    std::uint64_t key;
    std::uint32_t v;
  };

  std::size_t bucket_of(std::uint64_t bits) const {
    return bits == last_ ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(bits ^ last_));
  }

  std::vector<Entry> buckets_[65];
  std::uint64_t last_ = 0;
  std::size_t size_ = 0;
};

}  // namespace

GeodesicField::GeodesicField(int width, int height, std::vector<double> intensity, double gamma_g)
    : width_(width), height_(height), gamma_(gamma_g), intensity_(std::move(intensity)) {
  if (width < 1 || height < 1 || intensity_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("geodesic intensity field does not match dimensions");
  }
  if (!(gamma_g >= 0.0 && gamma_g <= 1.0)) {
    throw DataError("gamma_g must lie in [0,1]");
  }
  const std::size_t n = intensity_.size();
  for (int d = 0; d < 4; ++d) {
    cost_[d].assign(n, std::numeric_limits<double>::infinity());
    const int squared = (kStepDx[d] != 0 && kStepDy[d] != 0) ? 2 : 1;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const int nx = x + kStepDx[d];
        const int ny = y + kStepDy[d];
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) {
          continue;
        }
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        const std::size_t j = static_cast<std::size_t>(ny) * width + nx;
        cost_[d][i] = geodesic_step_cost(gamma_, squared, intensity_[j] - intensity_[i]);
      }
    }
  }
}

std::vector<double> GeodesicField::distances(std::span<const Pixel> seeds) const {
  if (seeds.empty()) {
    throw DataError("geodesic distance requires at least one seed");
  }
  const std::size_t n = intensity_.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  RadixHeap heap;

  for (const Pixel& s : seeds) {
    if (s.x < 0 || s.y < 0 || s.x >= width_ || s.y >= height_) {
      throw DataError("geodesic seed outside the image");
    }
    const auto i = static_cast<std::uint32_t>(s.y * width_ + s.x);
    if (dist[i] != 0.0) {
      dist[i] = 0.0;
      heap.push(0.0, i);
    }
  }

  while (!heap.empty()) {
    const auto [d, u] = heap.pop();
    if (d > dist[u]) {
      continue;
    }
    const int ux = static_cast<int>(u % width_);
    const int uy = static_cast<int>(u / width_);
    for (int k = 0; k < 8; ++k) {
      const int vx = ux + kStepDx[k];
      const int vy = uy + kStepDy[k];
      if (vx < 0 || vy < 0 || vx >= width_ || vy >= height_) {
        continue;
      }
      const auto v = static_cast<std::uint32_t>(vy * width_ + vx);
      const double w = k < 4 ? cost_[k][u] : cost_[k - 4][v];
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push(nd, v);
      }
    }
  }
  return dist;
}

std::vector<double> geodesic_distance_field(const ImageRGB& img, std::span<const Pixel> seeds,
                                            double gamma_g) {
  const auto lab = rgb_to_lab(img);
  std::vector<double> luminance(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i) {
    luminance[i] = lab[i][0];
  }
  return GeodesicField(img.width(), img.height(), std::move(luminance), gamma_g).distances(seeds);
}

}  // namespace sl
