#include "sl/pivots.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sl/components.hpp"
#include "sl/error.hpp"

namespace sl {

namespace {

// Clockwise in image coordinates (y down), starting west.
constexpr int kCwDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kCwDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kCwDx[d] == dx && kCwDy[d] == dy) {
      return d;
    }
  }
  return 0;
}

std::vector<Pixel> trace_component(const ComponentLabels& cl, int id) {
  const auto& labels = cl.labels;
  const Pixel start = cl.components[id].first;
  auto inside = [&](Pixel p) { return labels.contains(p) && labels.at(p) == id; };

  std::vector<Pixel> contour{start};
  Pixel cur = start;
  int backtrack = 0;  // west of the first pixel is never in the component
  Pixel second{-1, -1};
  // A contour visits each pixel at most four times.
  const std::size_t limit = 4 * cl.components[id].area + 8;
  while (contour.size() <= limit) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (backtrack + i) % 8;
      if (inside({cur.x + kCwDx[d], cur.y + kCwDy[d]})) {
        found = d;
        break;
      }
    }
    if (found < 0) {
      break;  // isolated pixel
    }
    const Pixel next{cur.x + kCwDx[found], cur.y + kCwDy[found]};
    const int prev_d = (found + 7) % 8;
    const Pixel prev{cur.x + kCwDx[prev_d], cur.y + kCwDy[prev_d]};
    if (cur == start) {
      if (second.x < 0) {
        second = next;
      } else if (next == second) {
        break;
      }
    }
    backtrack = direction_of(prev.x - next.x, prev.y - next.y);
    cur = next;
    if (cur == start) {
      continue;
    }
    contour.push_back(cur);
  }
  return contour;
}

}  // namespace

std::vector<Pixel> PivotSet::all() const {
  std::vector<Pixel> out = fg;
  out.insert(out.end(), bg.begin(), bg.end());
  return out;
}

std::vector<Pixel> class_contour(const ScribbleMap& scribbles, Label label) {
  const ComponentLabels cl = label_components(scribbles, label);
  std::vector<Pixel> contour;
  for (const Component& c : cl.components) {
    const auto part = trace_component(cl, c.id);
    contour.insert(contour.end(), part.begin(), part.end());
  }
  return contour;
}

std::vector<double> arc_lengths(const std::vector<Pixel>& polyline) {
  std::vector<double> s(polyline.size() + 1, 0.0);
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    const Pixel& a = polyline[i];
    const Pixel& b = polyline[(i + 1) % polyline.size()];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    s[i + 1] = s[i] + std::sqrt(dx * dx + dy * dy);
  }
  return s;
}

std::vector<Pixel> sample_class_pivots(const ScribbleMap& scribbles, Label label, int k) {
  if (k < 1) {
    throw DataError("pivot count must be at least 1");
  }
  std::vector<Pixel> labelled;
  for (std::size_t i = 0; i < scribbles.size(); ++i) {
    if (scribbles[i] == label) {
      labelled.push_back(scribbles.pixel(i));
    }
  }
  if (labelled.size() <= static_cast<std::size_t>(k)) {
    return labelled;
  }

  const std::vector<Pixel> contour = class_contour(scribbles, label);
  const std::vector<double> s = arc_lengths(contour);
  const double total = s.back();
  const std::size_t vertices = contour.size();

  auto key = [&](Pixel p) { return static_cast<std::size_t>(p.y) * scribbles.width() + p.x; };
  std::unordered_set<std::size_t> used;
  std::vector<Pixel> pivots;
  pivots.reserve(k);

  for (int j = 0; j < k; ++j) {
    const double target = total * j / k;
    // Nearest vertex by arc length; ties go to the earlier vertex.
    const auto it = std::lower_bound(s.begin(), s.begin() + vertices, target);
    std::size_t idx = static_cast<std::size_t>(it - s.begin());
    if (idx == vertices) {
      idx = vertices - 1;
    } else if (idx > 0 && target - s[idx - 1] <= s[idx] - target) {
      idx = idx - 1;
    }
    // Contours revisit pixels (thin strokes are traced on both sides); walk
    // forward to the next unused one.
    for (std::size_t step = 0; step < vertices; ++step) {
      const Pixel p = contour[(idx + step) % vertices];
      if (used.insert(key(p)).second) {
        pivots.push_back(p);
        break;
      }
    }
  }

  // Fewer distinct contour pixels than k: top up with evenly spaced interior
  // pixels in scan order.
  if (pivots.size() < static_cast<std::size_t>(k)) {
    std::vector<Pixel> rest;
    for (const Pixel& p : labelled) {
      if (!used.contains(key(p))) {
        rest.push_back(p);
      }
    }
    const std::size_t need = k - pivots.size();
    for (std::size_t j = 0; j < need; ++j) {
      pivots.push_back(rest[j * rest.size() / need]);
    }
  }
  return pivots;
}

PivotSet sample_pivots(const ScribbleMap& scribbles, int k1, int k2) {
  PivotSet set{sample_class_pivots(scribbles, Label::Foreground, k1),
               sample_class_pivots(scribbles, Label::Background, k2)};
  if (set.fg.empty()) {
    throw AnnotationError("scribbles contain no foreground pixels");
  }
  if (set.bg.empty()) {
    throw AnnotationError("scribbles contain no background pixels");
  }
  return set;
}

}  // namespace sl
