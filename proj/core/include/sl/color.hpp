#pragma once

#include <array>
#include <vector>

#include "sl/image.hpp"

namespace sl {

using LabColor = std::array<double, 3>;

/// CIE L*a*b* under D65 with the sRGB transfer curve. L in [0,100].
LabColor rgb_to_lab(Rgb rgb);
std::vector<LabColor> rgb_to_lab(const ImageRGB& img);

}  // namespace sl
