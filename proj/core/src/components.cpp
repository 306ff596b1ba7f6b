#include "sl/components.hpp"

#include <algorithm>

namespace sl {

ComponentLabels label_components(int width, int height,
                                 const std::function<bool(std::size_t)>& member) {
  ComponentLabels out{Raster<int>(width, height, -1), {}};
  auto& labels = out.labels;
  std::vector<std::size_t> stack;

  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (labels[start] != -1 || !member(start)) {
      continue;
    }
    Component comp;
    comp.id = static_cast<int>(out.components.size());
    comp.first = labels.pixel(start);
    comp.min_x = comp.max_x = comp.first.x;
    comp.min_y = comp.max_y = comp.first.y;

    labels[start] = comp.id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const Pixel p = labels.pixel(cur);
      ++comp.area;
      comp.min_x = std::min(comp.min_x, p.x);
      comp.max_x = std::max(comp.max_x, p.x);
      comp.min_y = std::min(comp.min_y, p.y);
      comp.max_y = std::max(comp.max_y, p.y);
      if (p.x == 0 || p.y == 0 || p.x == width - 1 || p.y == height - 1) {
        comp.touches_border = true;
      }
      for (int d = 0; d < 8; ++d) {
        const Pixel q{p.x + kDx8[d], p.y + kDy8[d]};
        if (!labels.contains(q)) {
          continue;
        }
        const std::size_t qi = labels.index(q);
        if (labels[qi] == -1 && member(qi)) {
          labels[qi] = comp.id;
          stack.push_back(qi);
        }
      }
    }
    out.components.push_back(comp);
  }
  return out;
}

}  // namespace sl
