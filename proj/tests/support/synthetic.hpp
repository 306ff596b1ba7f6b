#pragma once

#include <cstdint>

#include "sl/image.hpp"

namespace sl::testing {

/// Two-region test image: an elliptical foreground blob of one flat colour on
/// a background of another, with Gaussian noise, plus one foreground and
/// three background strokes.
struct SyntheticCase {
  ImageRGB image;
  Mask ground_truth;
  ScribbleMap scribbles;
};

struct SyntheticOptions {
  int width = 96;
  int height = 72;
  double noise_sigma = 5.0;  ///< in 8-bit units
  int background_strokes = 3;
};

SyntheticCase make_two_region_case(std::uint64_t seed, const SyntheticOptions& options = {});

/// Writes the image, scribble overlay and mask as PNGs plus a one-line
/// manifest entry for them; returns the manifest line.
std::string write_case(const SyntheticCase& c, const std::string& dir, const std::string& id);

}  // namespace sl::testing
