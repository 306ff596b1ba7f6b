#pragma once

#include <vector>

#include "sl/image.hpp"

namespace sl {

struct PivotSet {
  std::vector<Pixel> fg;
  std::vector<Pixel> bg;

  std::size_t size() const { return fg.size() + bg.size(); }
  /// Foreground pivots first, then background.
  std::vector<Pixel> all() const;
  friend bool operator==(const PivotSet&, const PivotSet&) = default;
};

/// Closed outer boundary of every 8-connected component carrying `label`,
/// traced clockwise (Moore neighbourhood) from each component's first pixel
/// and concatenated in scan order of those first pixels.
std::vector<Pixel> class_contour(const ScribbleMap& scribbles, Label label);

/// Cumulative arc length at each vertex of a closed polyline; the final entry
/// (index == size) is the total length including the closing segment.
std::vector<double> arc_lengths(const std::vector<Pixel>& polyline);

/// Up to k distinct pivots of one class, uniformly spaced along the class
/// contour starting at its first point. Classes with fewer than k labelled
/// pixels return all of them. Empty when the class is absent.
std::vector<Pixel> sample_class_pivots(const ScribbleMap& scribbles, Label label, int k);

/// Throws AnnotationError when either class is missing.
PivotSet sample_pivots(const ScribbleMap& scribbles, int k1, int k2);

}  // namespace sl
