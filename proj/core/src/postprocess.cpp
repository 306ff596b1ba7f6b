#include "sl/postprocess.hpp"

#include <cmath>

#include "sl/components.hpp"
#include "sl/error.hpp"

namespace sl {

Mask clean_mask(Mask mask, std::size_t island_min_area, std::size_t hole_max_area) {
  const ComponentLabels islands = label_components(mask, std::uint8_t{1});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const int id = islands.labels[i];
    if (id >= 0 && islands.components[static_cast<std::size_t>(id)].area < island_min_area) {
      mask[i] = 0;
    }
  }
  const ComponentLabels holes = label_components(mask, std::uint8_t{0});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const int id = holes.labels[i];
    if (id < 0) {
      continue;
    }
    const Component& c = holes.components[static_cast<std::size_t>(id)];
    if (!c.touches_border && c.area < hole_max_area) {
      mask[i] = 1;
    }
  }
  return mask;
}

Mask postprocess(std::span<const double> f, int width, int height, std::size_t island_min_area,
                 std::size_t hole_max_area) {
  Mask mask(width, height, std::uint8_t{0});
  if (f.size() != mask.size()) {
    throw DimensionError("smoothness field size does not match the mask");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      throw NumericError("smoothness field contains non-finite values");
    }
    mask[i] = f[i] > 0.0 ? 1 : 0;
  }
  return clean_mask(std::move(mask), island_min_area, hole_max_area);
}

}  // namespace sl
