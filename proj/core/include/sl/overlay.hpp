#pragma once

#include "sl/image.hpp"

namespace sl {

/// Mask boundary drawn in yellow over the image. With ground truth, true
/// positives are tinted green, false positives red and false negatives blue.
ImageRGB render_overlay(const ImageRGB& img, const Mask& mask, const Mask* gt = nullptr);

}  // namespace sl
