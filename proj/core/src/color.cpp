#include "sl/color.hpp"

#include <cmath>

namespace sl {

namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

std::array<double, 256> make_linear_table() {
  std::array<double, 256> table{};
  for (int i = 0; i < 256; ++i) {
    table[i] = srgb_to_linear(i / 255.0);
  }
  return table;
}

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = make_linear_table();
  return table;
}

}  // namespace

LabColor rgb_to_lab(Rgb rgb) {
  const auto& lin = linear_table();
  const double r = lin[rgb[0]];
  const double g = lin[rgb[1]];
  const double b = lin[rgb[2]];

  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);

  double L = 116.0 * fy - 16.0;
  // Clamp rounding noise at the ends of the range.
  L = std::min(100.0, std::max(0.0, L));
  return {L, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<LabColor> rgb_to_lab(const ImageRGB& img) {
  std::vector<LabColor> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rgb_to_lab(img.at(i));
  }
  return out;
}

}  // namespace sl
