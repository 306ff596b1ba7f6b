#include "sl/robot.hpp"

#include <deque>
#include <limits>
#include <ostream>
#include <tuple>

#include "sl/components.hpp"
#include "sl/error.hpp"
#include "sl/metrics.hpp"

namespace sl {

std::optional<Stroke> next_stroke(const Mask& mask, const Mask& gt) {
  if (mask.width() != gt.width() || mask.height() != gt.height()) {
    throw DimensionError("mask and ground truth differ in size");
  }
  const int w = mask.width();
  const int h = mask.height();
  const ComponentLabels errors =
      label_components(w, h, [&](std::size_t i) { return (mask[i] != 0) != (gt[i] != 0); });
  if (errors.components.empty()) {
    return std::nullopt;
  }
  const Component* best = &errors.components.front();
  for (const Component& c : errors.components) {
    if (c.area > best->area ||
        (c.area == best->area && std::tie(c.min_y, c.min_x) < std::tie(best->min_y, best->min_x))) {
      best = &c;
    }
  }

  // Chessboard distance to the nearest pixel outside the component; the
  // image border counts as outside.
  const int id = best->id;
  constexpr int kUnset = std::numeric_limits<int>::max();
  Raster<int> dist(w, h, kUnset);
  std::deque<std::size_t> queue;
  for (int y = best->min_y; y <= best->max_y; ++y) {
    for (int x = best->min_x; x <= best->max_x; ++x) {
      const Pixel p{x, y};
      if (errors.labels.at(p) != id) {
        continue;
      }
      bool edge = false;
      for (int d = 0; d < 8 && !edge; ++d) {
        const Pixel q{x + kDx8[d], y + kDy8[d]};
        edge = !errors.labels.contains(q) || errors.labels.at(q) != id;
      }
      if (edge) {
        dist.at(p) = 1;
        queue.push_back(dist.index(p));
      }
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const Pixel p = dist.pixel(i);
    for (int d = 0; d < 8; ++d) {
      const Pixel q{p.x + kDx8[d], p.y + kDy8[d]};
      if (dist.contains(q) && errors.labels.at(q) == id && dist.at(q) == kUnset) {
        dist.at(q) = dist[i] + 1;
        queue.push_back(dist.index(q));
      }
    }
  }

  Pixel center = best->first;
  int top = 0;
  for (int y = best->min_y; y <= best->max_y; ++y) {
    for (int x = best->min_x; x <= best->max_x; ++x) {
      const Pixel p{x, y};
      if (errors.labels.at(p) == id && dist.at(p) > top) {
        top = dist.at(p);
        center = p;
      }
    }
  }
  return Stroke{center, kStrokeDiameter, gt.at(center) ? Label::Foreground : Label::Background};
}

ScribbleMap stroke_scribbles(const Stroke& stroke, const Mask& gt) {
  ScribbleMap out(gt.width(), gt.height(), Label::Unlabeled);
  const int r = (stroke.diameter - 1) / 2;
  const std::uint8_t want = stroke.label == Label::Foreground ? 1 : 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const Pixel p{stroke.center.x + dx, stroke.center.y + dy};
      if (dx * dx + dy * dy > r * r || !out.contains(p)) {
        continue;
      }
      if ((gt.at(p) != 0 ? 1 : 0) == want) {
        out.at(p) = stroke.label;
      }
    }
  }
  return out;
}

std::vector<double> RobotTrace::jaccards() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) {
    out.push_back(s.jaccard);
  }
  return out;
}

RobotTrace run_robot(const ImageRGB& img, const Mask& gt, const ScribbleMap& initial,
                     const SegmenterParams& params, int max_strokes, RobotMode mode) {
  require_same_size(img, gt, "ground truth");
  require_same_size(img, initial, "scribbles");
  ScribbleMap scribbles = initial;
  std::optional<SessionState> state;
  // With a single class the smoothest labelling is that class everywhere
  // (the constant function fits every label at zero cost), so segmentation
  // only starts once a stroke brings in the other class.
  auto resegment = [&]() -> Mask {
    const bool fg = count_label(scribbles, Label::Foreground) > 0;
    const bool bg = count_label(scribbles, Label::Background) > 0;
    if (!fg && !bg) {
      throw AnnotationError("robot needs at least one initial scribble");
    }
    if (!fg || !bg) {
      return Mask(img.width(), img.height(), fg ? 1 : 0);
    }
    if (mode == RobotMode::Incremental) {
      state = start_session(img, scribbles, params);
      return state->last->mask;
    }
    return segment_single_pass(img, scribbles, params).mask;
  };

  RobotTrace trace;
  Mask mask = resegment();
  trace.steps.push_back({0, std::nullopt, jaccard(confusion(mask, gt))});
  for (int step = 1; step <= max_strokes; ++step) {
    const auto stroke = next_stroke(mask, gt);
    if (!stroke) {
      break;
    }
    const ScribbleMap added = stroke_scribbles(*stroke, gt);
    if (state) {
      mask = segment_incremental(*state, added).mask;
    } else {
      scribbles = merge_scribbles(scribbles, added);
      mask = resegment();
    }
    trace.steps.push_back({step, stroke, jaccard(confusion(mask, gt))});
  }
  trace.final_mask = std::move(mask);
  return trace;
}

void write_trace_csv(const RobotTrace& trace, std::ostream& out) {
  out << "step,center_x,center_y,label,jaccard\n";
  const auto precision = out.precision(10);
  for (const auto& s : trace.steps) {
    out << s.step << ',';
    if (s.stroke) {
      out << s.stroke->center.x << ',' << s.stroke->center.y << ','
          << (s.stroke->label == Label::Foreground ? "fg" : "bg");
    } else {
      out << ",,initial";
    }
    out << ',' << s.jaccard << '\n';
  }
  out.precision(precision);
}

}  // namespace sl
