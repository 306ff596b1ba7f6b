#pragma once

#include <vector>

#include "sl/image.hpp"

namespace sl {

/// Intermediate Canny products, exposed for testing against other
/// implementations.
struct CannyDetail {
  std::vector<float> smoothed;   ///< gray image after the sigma=1 Gaussian
  std::vector<float> magnitude;  ///< L2 Sobel gradient magnitude
  float max_magnitude = 0.0f;
  std::vector<std::uint8_t> edges;  ///< 1 on final edge pixels
};

/// Canny detector on the gray image (0.299 R + 0.587 G + 0.114 B): Gaussian
/// smoothing (sigma 1, 7-tap), 3x3 Sobel, non-maximum suppression and
/// hysteresis. `low` and `high` are fractions of the maximum gradient
/// magnitude, 0 <= low < high.
CannyDetail canny_detail(const ImageRGB& img, double low, double high);

/// Edge strength p_con per pixel: 0 off edges; on edges the gradient magnitude
/// normalised by its maximum, clamped to [0.01, 0.99].
Raster<double> canny_edges(const ImageRGB& img, double low, double high);

/// Pixels on the Bresenham line from `a` to `b`, both endpoints included.
std::vector<Pixel> bresenham_line(Pixel a, Pixel b);

/// 1 - max p_con over the Bresenham line between p1 and p2.
double intervening_contour_affinity(const Raster<double>& edges, Pixel p1, Pixel p2);

}  // namespace sl
