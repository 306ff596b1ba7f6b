#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sl/features.hpp"
#include "sl/image.hpp"
#include "sl/pivots.hpp"

namespace sl {

struct SegmenterParams {
  int m = 100;
  int bins = 50;
  double lambda = 100.0;
  AffinityConfig affinity;  ///< pivot counts, cues, bandwidths, scales
  Augmentation mode = Augmentation::Multiply;
  /// Unset means 0.1% of the image area.
  std::optional<std::size_t> island_min_area;
  std::optional<std::size_t> hole_max_area;
  /// Pins f to the scribble label on every scribbled pixel before thresholding.
  bool clamp_seeds = true;
  /// Constant column in U; see SmoothnessParams::intercept.
  bool intercept = true;
  int jobs = 0;  ///< < 1 means all hardware threads

  void validate() const;
  std::size_t island_area_for(std::size_t pixels) const;
  std::size_t hole_area_for(std::size_t pixels) const;
};

struct SegmentationResult {
  Mask mask;
  std::vector<double> f_field;
  std::vector<std::pair<std::string, double>> timings;  ///< stage, seconds
  SegmenterParams params;
  std::vector<std::string> warnings;

  double total_seconds() const;
};

/// Everything needed to refine a segmentation with further strokes.
struct SessionState {
  std::shared_ptr<const ImageContext> context;
  SegmenterParams params;
  ScribbleMap scribbles;           ///< every stroke so far
  PivotSet pivots;                 ///< accumulated over batches
  std::vector<PivotCues> batches;  ///< one per refinement
  std::optional<SegmentationResult> last;
};

/// Throws AnnotationError when either class is missing, DimensionError when
/// the scribbles do not match the image.
SegmentationResult segment_single_pass(const ImageRGB& img, const ScribbleMap& scribbles,
                                       const SegmenterParams& params);

/// Runs a single pass and keeps the state needed for incremental refinement.
SessionState start_session(const ImageRGB& img, const ScribbleMap& scribbles,
                           const SegmenterParams& params);

/// Pivots are sampled from `new_scribbles` only and their feature columns are
/// appended to the stored ones; PCA and the solve are rerun on the widened
/// matrix. New labels override old ones on overlap. An empty map returns the
/// previous result unchanged.
SegmentationResult segment_incremental(SessionState& state, const ScribbleMap& new_scribbles);

/// Pixels labeled in `update` overwrite those in `base`.
ScribbleMap merge_scribbles(const ScribbleMap& base, const ScribbleMap& update);

}  // namespace sl
