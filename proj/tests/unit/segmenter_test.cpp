#include <algorithm>

#include <gtest/gtest.h>

#include "sl/metrics.hpp"
#include "sl/pca.hpp"
#include "sl/segmenter.hpp"
#include "synthetic.hpp"

namespace {

sl::SegmenterParams fast_params() {
  sl::SegmenterParams p;
  p.m = 40;
  p.affinity.k1 = p.affinity.k2 = 8;
  return p;
}

// Splits a scribble map into its foreground part plus the first background
// component, and the remaining background.
std::pair<sl::ScribbleMap, sl::ScribbleMap> split_strokes(const sl::ScribbleMap& s) {
  sl::ScribbleMap first(s.width(), s.height(), sl::Label::Unlabeled);
  sl::ScribbleMap second = first;
  int bg_seen = 0;
  for (int x = 0; x < s.width(); ++x) {
    for (int y = 0; y < s.height(); ++y) {
      const auto l = s.at({x, y});
      if (l == sl::Label::Background && bg_seen++ < 10) {
        first.at({x, y}) = l;
      } else if (l == sl::Label::Background) {
        second.at({x, y}) = l;
      } else if (l == sl::Label::Foreground) {
        first.at({x, y}) = l;
      }
    }
  }
  return {first, second};
}

}  // namespace

TEST(SegmentSinglePass, NoiseFreeTwoColourRegions) {
  sl::testing::SyntheticOptions opts;
  opts.noise_sigma = 0.0;
  const auto c = sl::testing::make_two_region_case(5, opts);
  const auto r = sl::segment_single_pass(c.image, c.scribbles, sl::SegmenterParams{});
  EXPECT_GE(sl::jaccard(sl::confusion(r.mask, c.ground_truth)), 0.99);
  EXPECT_EQ(r.f_field.size(), c.image.pixel_count());
  std::vector<std::string> stages;
  for (const auto& [stage, s] : r.timings) {
    stages.push_back(stage);
    EXPECT_GE(s, 0.0);
  }
  EXPECT_EQ(stages, (std::vector<std::string>{"context", "pivots", "features", "smoothness", "postprocess"}));
}

TEST(SegmentSinglePass, FullyLabeledImageReproducesLabels) {
  const auto c = sl::testing::make_two_region_case(6);
  sl::ScribbleMap all(c.image.width(), c.image.height(), sl::Label::Background);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (c.ground_truth[i]) {
      all[i] = sl::Label::Foreground;
    }
  }
  const auto r = sl::segment_single_pass(c.image, all, fast_params());
  EXPECT_EQ(r.mask, c.ground_truth);
}

TEST(SegmentSinglePass, Deterministic) {
  const auto c = sl::testing::make_two_region_case(7);
  auto p = fast_params();
  const auto a = sl::segment_single_pass(c.image, c.scribbles, p);
  p.jobs = 1;
  const auto b = sl::segment_single_pass(c.image, c.scribbles, p);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.f_field, b.f_field);
}

TEST(SegmentSinglePass, ConcatModeRuns) {
  const auto c = sl::testing::make_two_region_case(8);
  auto p = fast_params();
  p.mode = sl::Augmentation::Concat;
  const auto r = sl::segment_single_pass(c.image, c.scribbles, p);
  EXPECT_GT(sl::jaccard(sl::confusion(r.mask, c.ground_truth)), 0.5);
}

TEST(SegmentSinglePass, Errors) {
  const auto c = sl::testing::make_two_region_case(1);
  sl::ScribbleMap fg_only = c.scribbles;
  for (auto& l : fg_only.values()) {
    if (l == sl::Label::Background) {
      l = sl::Label::Unlabeled;
    }
  }
  EXPECT_THROW(sl::segment_single_pass(c.image, fg_only, fast_params()), sl::AnnotationError);
  EXPECT_THROW(sl::segment_single_pass(c.image, sl::ScribbleMap(5, 5), fast_params()), sl::DimensionError);
  auto bad = fast_params();
  bad.lambda = -1.0;
  EXPECT_THROW(sl::segment_single_pass(c.image, c.scribbles, bad), sl::DataError);
  bad = fast_params();
  bad.affinity.scales = {};
  EXPECT_THROW(sl::segment_single_pass(c.image, c.scribbles, bad), sl::DataError);
}

TEST(SegmentSinglePass, DefaultAreasArePerMille) {
  sl::SegmenterParams p;
  EXPECT_EQ(p.island_area_for(154401), 154u);
  p.hole_max_area = 3;
  EXPECT_EQ(p.hole_area_for(154401), 3u);
}

TEST(SegmentIncremental, EmptyStrokesReturnPreviousResult) {
  const auto c = sl::testing::make_two_region_case(10);
  auto state = sl::start_session(c.image, c.scribbles, fast_params());
  const auto before = state.last->mask;
  const auto r = sl::segment_incremental(state, sl::ScribbleMap(c.image.width(), c.image.height()));
  EXPECT_EQ(r.mask, before);
  EXPECT_EQ(state.batches.size(), 1u);
}

TEST(SegmentIncremental, FeatureColumnsMatchPerStrokeSampling) {
  const auto c = sl::testing::make_two_region_case(11);
  const auto [s1, s2] = split_strokes(c.scribbles);
  const auto p = fast_params();
  auto state = sl::start_session(c.image, s1, p);
  sl::segment_incremental(state, s2);
  ASSERT_EQ(state.batches.size(), 2u);
  EXPECT_EQ(state.scribbles, sl::merge_scribbles(s1, s2));

  // Naive construction on s1 u s2 with pivots sampled per stroke batch.
  const sl::ImageContext ctx(c.image, p.affinity);
  const auto first = sl::sample_pivots(s1, p.affinity.k1, p.affinity.k2).all();
  auto second = sl::sample_class_pivots(s2, sl::Label::Foreground, p.affinity.k1);
  const auto second_bg = sl::sample_class_pivots(s2, sl::Label::Background, p.affinity.k2);
  second.insert(second.end(), second_bg.begin(), second_bg.end());
  const std::vector<sl::PivotCues> naive{
      sl::compute_pivot_cues(ctx, first, p.affinity, p.mode),
      sl::compute_pivot_cues(ctx, second, p.affinity, p.mode)};
  for (double scale : p.affinity.scales) {
    const auto a = sl::assemble_features(*state.context, state.batches, scale);
    const auto b = sl::assemble_features(ctx, naive, scale);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(SegmentIncremental, FailedRefinementLeavesStateUntouched) {
  const auto c = sl::testing::make_two_region_case(12);
  auto state = sl::start_session(c.image, c.scribbles, fast_params());
  const auto scribbles = state.scribbles;
  EXPECT_THROW(sl::segment_incremental(state, sl::ScribbleMap(3, 3)), sl::DimensionError);
  EXPECT_EQ(state.scribbles, scribbles);
  EXPECT_EQ(state.batches.size(), 1u);
}

TEST(MergeScribbles, UpdateWins) {
  sl::ScribbleMap a(3, 1, std::vector<sl::Label>{sl::Label::Foreground, sl::Label::Unlabeled, sl::Label::Background});
  sl::ScribbleMap b(3, 1, std::vector<sl::Label>{sl::Label::Background, sl::Label::Unlabeled, sl::Label::Unlabeled});
  EXPECT_EQ(sl::merge_scribbles(a, b),
            sl::ScribbleMap(3, 1, std::vector<sl::Label>{sl::Label::Background, sl::Label::Unlabeled,
                                                         sl::Label::Background}));
}
