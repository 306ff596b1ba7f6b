#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sl/image.hpp"

namespace sl {

struct Component {
  int id = 0;
  std::size_t area = 0;
  Pixel first;  ///< first pixel in scan order
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool touches_border = false;
};

struct ComponentLabels {
  /// -1 for pixels outside every component.
  Raster<int> labels;
  /// Ordered by first pixel in scan order; components[i].id == i.
  std::vector<Component> components;
};

/// 8-connected components of the pixels for which `member(index)` is true.
ComponentLabels label_components(int width, int height,
                                 const std::function<bool(std::size_t)>& member);

template <typename T>
ComponentLabels label_components(const Raster<T>& raster, T value) {
  return label_components(raster.width(), raster.height(),
                          [&](std::size_t i) { return raster[i] == value; });
}

inline constexpr int kDx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kDy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

}  // namespace sl
