#pragma once

#include <cstddef>
#include <span>

#include "sl/image.hpp"

namespace sl {

/// Foreground where f > 0. Then removes 8-connected foreground islands with
/// area < island_min_area and fills 8-connected background components that do
/// not touch the border and have area < hole_max_area.
Mask postprocess(std::span<const double> f, int width, int height, std::size_t island_min_area,
                 std::size_t hole_max_area);

/// Same cleanup on an existing mask.
Mask clean_mask(Mask mask, std::size_t island_min_area, std::size_t hole_max_area);

}  // namespace sl
