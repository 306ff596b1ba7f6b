#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sl/image.hpp"
#include "sl/segmenter.hpp"

namespace sl {

inline constexpr int kStrokeDiameter = 17;
inline constexpr int kMaxRobotStrokes = 20;

struct Stroke {
  Pixel center;
  int diameter = kStrokeDiameter;
  Label label = Label::Foreground;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

/// Corrective stroke at the innermost pixel of the largest error component,
/// or nullopt when mask == gt.
std::optional<Stroke> next_stroke(const Mask& mask, const Mask& gt);

/// Disk pixels (distance to centre <= radius) inside the image whose ground
/// truth class matches the stroke label, as a scribble map.
ScribbleMap stroke_scribbles(const Stroke& stroke, const Mask& gt);

enum class RobotMode { Naive, Incremental };

struct RobotStep {
  int step = 0;
  std::optional<Stroke> stroke;  ///< empty for the initial scribbles
  double jaccard = 0.0;
};

struct RobotTrace {
  std::vector<RobotStep> steps;
  Mask final_mask;

  std::vector<double> jaccards() const;
};

/// Segments from `initial`, then adds one corrective stroke at a time until the
/// mask matches or `max_strokes` is reached. Naive mode re-segments from all
/// scribbles; incremental mode extends the session. Scribbles holding a single
/// class label the whole image with it until the other class appears.
RobotTrace run_robot(const ImageRGB& img, const Mask& gt, const ScribbleMap& initial,
                     const SegmenterParams& params, int max_strokes = kMaxRobotStrokes,
                     RobotMode mode = RobotMode::Naive);

/// step,center_x,center_y,label,jaccard
void write_trace_csv(const RobotTrace& trace, std::ostream& out);

}  // namespace sl
