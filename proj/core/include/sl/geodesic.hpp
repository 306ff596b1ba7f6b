#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sl/image.hpp"

namespace sl {

/// Cost of one 8-connected step between neighbouring pixels:
///   sqrt((1 - gamma) * d^2 + gamma * (I(b) - I(a))^2)
/// with d^2 in {1, 2} and I the luminance channel.
inline double geodesic_step_cost(double gamma_g, int squared_step, double intensity_delta) {
  return std::sqrt((1.0 - gamma_g) * squared_step + gamma_g * intensity_delta * intensity_delta);
}

/// Exact shortest-path geodesic distances over the 8-connected pixel grid.
/// Step costs are precomputed once; each `distances` call is one multi-source
/// Dijkstra run, so one field can be queried per pivot without recomputing
/// the costs.
class GeodesicField {
 public:
  /// `intensity` is one value per pixel in scan order (luminance L of LAB in
  /// the segmentation pipeline).
  GeodesicField(int width, int height, std::vector<double> intensity, double gamma_g);

  int width() const { return width_; }
  int height() const { return height_; }
  double gamma() const { return gamma_; }

  /// Distance from the nearest seed for every pixel; seeds are 0.
  std::vector<double> distances(std::span<const Pixel> seeds) const;

 private:
  int width_;
  int height_;
  double gamma_;
  std::vector<double> intensity_;
  // Forward step costs for directions E, SE, S, SW (index 0..3); the reverse
  // directions reuse the neighbour's entry since the cost is symmetric.
  std::vector<double> cost_[4];
};

/// Convenience wrapper: luminance from LAB, one Dijkstra run.
std::vector<double> geodesic_distance_field(const ImageRGB& img, std::span<const Pixel> seeds,
                                            double gamma_g);

}  // namespace sl
