#include "sl/canny.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sl/error.hpp"

namespace sl {

namespace {

// BORDER_REFLECT_101: -1 -> 1, n -> n-2.
int reflect101(int i, int n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    i = i < 0 ? -i : 2 * n - 2 - i;
  }
  return i;
}

std::vector<float> gaussian_blur(const std::vector<float>& src, int w, int h) {
  constexpr int radius = 3;
  float kernel[2 * radius + 1];
  float sum = 0.0f;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5f * static_cast<float>(k * k));
    sum += kernel[k + radius];
  }
  for (float& v : kernel) {
    v /= sum;
  }
  std::vector<float> tmp(src.size());
  std::vector<float> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * src[static_cast<std::size_t>(y) * w + reflect101(x + k, w)];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * tmp[static_cast<std::size_t>(reflect101(y + k, h)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

}  // namespace

CannyDetail canny_detail(const ImageRGB& img, double low, double high) {
  if (!(low >= 0.0 && low < high)) {
    throw DataError("canny thresholds must satisfy 0 <= low < high");
  }
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.pixel_count();

  std::vector<float> gray(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rgb c = img.at(i);
    gray[i] = 0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2];
  }

  CannyDetail out;
  out.smoothed = gaussian_blur(gray, w, h);
  const auto& s = out.smoothed;
  auto px = [&](int x, int y) {
    return s[static_cast<std::size_t>(reflect101(y, h)) * w + reflect101(x, w)];
  };

  std::vector<float> gx(n), gy(n);
  out.magnitude.assign(n, 0.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float dx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                       (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const float dy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                       (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = dx;
      gy[i] = dy;
      out.magnitude[i] = std::sqrt(dx * dx + dy * dy);
    }
  }
  out.max_magnitude = *std::max_element(out.magnitude.begin(), out.magnitude.end());
  out.edges.assign(n, 0);
  if (out.max_magnitude <= 0.0f) {
    return out;
  }

  const float low_abs = static_cast<float>(low) * out.max_magnitude;
  const float high_abs = static_cast<float>(high) * out.max_magnitude;
  const auto& mag = out.magnitude;
  auto m = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) {
      return 0.0f;
    }
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  // Non-maximum suppression over four quantised directions; 0 = suppressed,
  // 1 = weak candidate, 2 = strong.
  constexpr float tan22 = 0.4142135623730950f;
  std::vector<std::uint8_t> state(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const float g = mag[i];
      if (g <= low_abs) {
        continue;
      }
      const float ax = std::abs(gx[i]);
      const float ay = std::abs(gy[i]);
      bool is_max;
      if (ay <= tan22 * ax) {
        is_max = g > m(x - 1, y) && g >= m(x + 1, y);
      } else if (ax <= tan22 * ay) {
        is_max = g > m(x, y - 1) && g >= m(x, y + 1);
      } else {
        const int sign = (gx[i] * gy[i] < 0) ? -1 : 1;
        is_max = g > m(x - sign, y - 1) && g > m(x + sign, y + 1);
      }
      if (is_max) {
        state[i] = g > high_abs ? 2 : 1;
      }
    }
  }

  // Hysteresis: grow strong edges through 8-connected weak candidates.
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == 2) {
      out.edges[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
          continue;
        }
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (state[j] == 1 && !out.edges[j]) {
          out.edges[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return out;
}

Raster<double> canny_edges(const ImageRGB& img, double low, double high) {
  const CannyDetail detail = canny_detail(img, low, high);
  Raster<double> pcon(img.width(), img.height(), 0.0);
  for (std::size_t i = 0; i < pcon.size(); ++i) {
    if (detail.edges[i]) {
      const double v = detail.magnitude[i] / detail.max_magnitude;
      pcon[i] = std::clamp(v, 0.01, 0.99);
    }
  }
  return pcon;
}

std::vector<Pixel> bresenham_line(Pixel a, Pixel b) {
  std::vector<Pixel> line;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Pixel p = a;
  while (true) {
    line.push_back(p);
    if (p == b) {
      break;
    }
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return line;
}

double intervening_contour_affinity(const Raster<double>& edges, Pixel p1, Pixel p2) {
  if (!edges.contains(p1) || !edges.contains(p2)) {
    throw DataError("intervening contour endpoints must lie inside the image");
  }
  double peak = 0.0;
  for (const Pixel& p : bresenham_line(p1, p2)) {
    peak = std::max(peak, edges.at(p));
  }
  return 1.0 - peak;
}

}  // namespace sl
