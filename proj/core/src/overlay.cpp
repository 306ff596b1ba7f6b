#include "sl/overlay.hpp"

namespace sl {

namespace {

constexpr Rgb kBoundary{255, 255, 0};
constexpr Rgb kTruePositive{0, 200, 0};
constexpr Rgb kFalsePositive{220, 0, 0};
constexpr Rgb kFalseNegative{0, 0, 220};

void blend(std::vector<std::uint8_t>& data, std::size_t i, const Rgb& tint) {
  for (int c = 0; c < 3; ++c) {
    auto& v = data[3 * i + c];
    v = static_cast<std::uint8_t>((v + tint[c] + 1) / 2);
  }
}

}  // namespace

ImageRGB render_overlay(const ImageRGB& img, const Mask& mask, const Mask* gt) {
  require_same_size(img, mask, "mask");
  if (gt) {
    require_same_size(img, *gt, "ground truth");
  }
  std::vector<std::uint8_t> data(img.data().begin(), img.data().end());
  if (gt) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      const bool m = mask[i] != 0;
      const bool g = (*gt)[i] != 0;
      if (m && g) {
        blend(data, i, kTruePositive);
      } else if (m) {
        blend(data, i, kFalsePositive);
      } else if (g) {
        blend(data, i, kFalseNegative);
      }
    }
  }
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) {
      continue;
    }
    const Pixel p = mask.pixel(i);
    for (int d = 0; d < 4; ++d) {
      const Pixel q{p.x + dx[d], p.y + dy[d]};
      if (mask.contains(q) && !mask.at(q)) {
        for (int c = 0; c < 3; ++c) {
          data[3 * i + c] = kBoundary[c];
        }
        break;
      }
    }
  }
  return ImageRGB(img.width(), img.height(), std::move(data));
}

}  // namespace sl
