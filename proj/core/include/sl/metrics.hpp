#pragma once

#include <cstdint>
#include <span>

#include "sl/image.hpp"

namespace sl {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Foreground is the positive class.
Confusion confusion(const Mask& mask, const Mask& gt);

/// TP / (TP + FP + FN); 1 when neither mask has foreground.
double jaccard(const Confusion& c);
/// 2TP / (2TP + FP + FN); 1 when neither mask has foreground.
double fscore(const Confusion& c);

inline constexpr double kBandLow = 0.85;
inline constexpr double kBandHigh = 0.98;

/// Area above the step curve of Jaccard against stroke count, with the curve
/// clamped to [a_low, a_high], up to the first entry reaching a_high, divided
/// by the band height. Every entry spans one stroke, so a trace that never
/// reaches a_high is charged its full length.
double avg_strokes(std::span<const double> jaccard_trace, double a_low = kBandLow,
                   double a_high = kBandHigh);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  ///< population
};

MeanStd mean_std(std::span<const double> values);

}  // namespace sl
