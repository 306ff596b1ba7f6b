#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sl/dataset.hpp"
#include "sl/metrics.hpp"
#include "sl/robot.hpp"
#include "sl/segmenter.hpp"

namespace sl {

enum class EvalMode { SinglePass, Robot };

struct EvalOptions {
  SegmenterParams params;
  EvalMode mode = EvalMode::SinglePass;
  RobotMode robot_mode = RobotMode::Naive;
  int max_strokes = kMaxRobotStrokes;
  double band_low = kBandLow;
  double band_high = kBandHigh;
};

struct SampleResult {
  std::string id;
  bool ok = false;
  std::string error;
  double jaccard = 0.0;
  double fscore = 0.0;
  std::optional<double> avg_strokes;  ///< robot mode only
  double seconds = 0.0;
};

struct EvalReport {
  EvalMode mode = EvalMode::SinglePass;
  std::vector<SampleResult> samples;  ///< manifest order
  MeanStd jaccard;
  MeanStd fscore;
  std::optional<MeanStd> avg_strokes;
  std::size_t evaluated = 0;
  std::size_t failed = 0;
};

/// Failed samples are recorded with their message and left out of the
/// aggregates. In robot mode the reported JI and F-score are those after the
/// final stroke.
EvalReport evaluate_dataset(const DatasetManifest& manifest, const EvalOptions& options);

/// `id,jaccard,fscore[,avg_strokes]` rows, then a `mean` and a `std` row.
/// `header` lines are written first, each prefixed with "# ".
void write_report_csv(const EvalReport& report, std::ostream& out,
                      const std::vector<std::string>& header = {});
void print_report_table(const EvalReport& report, std::ostream& out);

}  // namespace sl
