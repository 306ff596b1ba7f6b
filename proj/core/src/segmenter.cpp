#include "sl/segmenter.hpp"

#include <chrono>

#include "sl/alpha.hpp"
#include "sl/error.hpp"
#include "sl/postprocess.hpp"
#include "sl/smoothness.hpp"

namespace sl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t default_area(std::size_t pixels) {
  return pixels / 1000;
}

void require_both_classes(const ScribbleMap& scribbles) {
  if (count_label(scribbles, Label::Foreground) == 0) {
    throw AnnotationError("scribbles contain no foreground pixels");
  }
  if (count_label(scribbles, Label::Background) == 0) {
    throw AnnotationError("scribbles contain no background pixels");
  }
}

LabeledSet labels_of(const ScribbleMap& scribbles) {
  LabeledSet set;
  for (std::size_t i = 0; i < scribbles.size(); ++i) {
    if (scribbles[i] != Label::Unlabeled) {
      set.rows.push_back(static_cast<Eigen::Index>(i));
      set.y.push_back(scribbles[i] == Label::Foreground ? 1.0 : -1.0);
    }
  }
  return set;
}

SegmentationResult solve_state(const SessionState& state,
                               std::vector<std::pair<std::string, double>> timings) {
  const SegmenterParams& p = state.params;
  const ImageContext& ctx = *state.context;
  SegmentationResult out;
  out.params = p;

  auto start = Clock::now();
  SmoothnessParams sp;
  sp.m = p.m;
  sp.bins = p.bins;
  sp.lambda = p.lambda;
  sp.jobs = p.jobs;
  sp.intercept = p.intercept;
  const LabeledSet labels = labels_of(state.scribbles);
  MultiscaleResult ms = multiscale_smoothness(ctx, state.batches, p.affinity.scales, labels, sp);
  out.warnings = std::move(ms.warnings);
  if (p.clamp_seeds) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ms.f(labels.rows[i]) = labels.y[i];
    }
  }
  out.f_field.assign(ms.f.data(), ms.f.data() + ms.f.size());
  timings.emplace_back("smoothness", seconds_since(start));

  start = Clock::now();
  const std::size_t pixels = ctx.pixel_count();
  out.mask = postprocess(out.f_field, ctx.width(), ctx.height(), p.island_area_for(pixels),
                         p.hole_area_for(pixels));
  timings.emplace_back("postprocess", seconds_since(start));
  out.timings = std::move(timings);
  return out;
}

}  // namespace

void SegmenterParams::validate() const {
  if (m < 1) {
    throw DataError("eigenvector count must be at least 1");
  }
  if (bins < 2) {
    throw DataError("bin count must be at least 2");
  }
  if (!(lambda > 0.0)) {
    throw DataError("lambda must be positive");
  }
  affinity.validate();
}

std::size_t SegmenterParams::island_area_for(std::size_t pixels) const {
  return island_min_area.value_or(default_area(pixels));
}

std::size_t SegmenterParams::hole_area_for(std::size_t pixels) const {
  return hole_max_area.value_or(default_area(pixels));
}

double SegmentationResult::total_seconds() const {
  double total = 0.0;
  for (const auto& [stage, s] : timings) {
    total += s;
  }
  return total;
}

ScribbleMap merge_scribbles(const ScribbleMap& base, const ScribbleMap& update) {
  if (base.width() != update.width() || base.height() != update.height()) {
    throw DimensionError("scribble maps differ in size");
  }
  ScribbleMap out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (update[i] != Label::Unlabeled) {
      out[i] = update[i];
    }
  }
  return out;
}

SessionState start_session(const ImageRGB& img, const ScribbleMap& scribbles,
                           const SegmenterParams& params) {
  params.validate();
  require_same_size(img, scribbles, "scribble map");
  require_both_classes(scribbles);

  std::vector<std::pair<std::string, double>> timings;
  auto start = Clock::now();
  SessionState state;
  state.params = params;
  state.scribbles = scribbles;
  state.context = std::make_shared<const ImageContext>(img, params.affinity);
  timings.emplace_back("context", seconds_since(start));

  start = Clock::now();
  state.pivots = sample_pivots(scribbles, params.affinity.k1, params.affinity.k2);
  timings.emplace_back("pivots", seconds_since(start));

  start = Clock::now();
  const auto all = state.pivots.all();
  state.batches.push_back(
      compute_pivot_cues(*state.context, all, params.affinity, params.mode, params.jobs));
  timings.emplace_back("features", seconds_since(start));

  state.last = solve_state(state, std::move(timings));
  return state;
}

SegmentationResult segment_single_pass(const ImageRGB& img, const ScribbleMap& scribbles,
                                       const SegmenterParams& params) {
  return std::move(*start_session(img, scribbles, params).last);
}

SegmentationResult segment_incremental(SessionState& state, const ScribbleMap& new_scribbles) {
  if (!state.context || !state.last) {
    throw DataError("incremental segmentation needs an initialised session");
  }
  require_same_size(state.context->image(), new_scribbles, "scribble map");
  const auto fg = sample_class_pivots(new_scribbles, Label::Foreground, state.params.affinity.k1);
  const auto bg = sample_class_pivots(new_scribbles, Label::Background, state.params.affinity.k2);
  if (fg.empty() && bg.empty()) {
    return *state.last;
  }

  std::vector<std::pair<std::string, double>> timings;
  auto start = Clock::now();
  std::vector<Pixel> batch = fg;
  batch.insert(batch.end(), bg.begin(), bg.end());
  PivotCues cues =
      compute_pivot_cues(*state.context, batch, state.params.affinity, state.params.mode, state.params.jobs);
  timings.emplace_back("features", seconds_since(start));

  const ScribbleMap previous = state.scribbles;
  const std::size_t fg_before = state.pivots.fg.size();
  const std::size_t bg_before = state.pivots.bg.size();
  state.scribbles = merge_scribbles(previous, new_scribbles);
  state.pivots.fg.insert(state.pivots.fg.end(), fg.begin(), fg.end());
  state.pivots.bg.insert(state.pivots.bg.end(), bg.begin(), bg.end());
  state.batches.push_back(std::move(cues));
  try {
    state.last = solve_state(state, std::move(timings));
  } catch (...) {
    state.scribbles = previous;
    state.pivots.fg.resize(fg_before);
    state.pivots.bg.resize(bg_before);
    state.batches.pop_back();
    throw;
  }
  return *state.last;
}

}  // namespace sl
