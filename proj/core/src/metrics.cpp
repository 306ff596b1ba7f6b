#include "sl/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sl/error.hpp"

namespace sl {

Confusion confusion(const Mask& mask, const Mask& gt) {
  if (mask.width() != gt.width() || mask.height() != gt.height()) {
    throw DimensionError("mask and ground truth differ in size");
  }
  Confusion c;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool m = mask[i] != 0;
    const bool g = gt[i] != 0;
    if (m && g) {
      ++c.tp;
    } else if (m) {
      ++c.fp;
    } else if (g) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double jaccard(const Confusion& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double fscore(const Confusion& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double avg_strokes(std::span<const double> jaccard_trace, double a_low, double a_high) {
  if (jaccard_trace.empty()) {
    throw DataError("avg_strokes needs a nonempty trace");
  }
  if (!(a_low < a_high)) {
    throw DataError("avg_strokes band must satisfy a_low < a_high");
  }
  double area = 0.0;
  for (double ji : jaccard_trace) {
    const double c = std::clamp(ji, a_low, a_high);
    if (c >= a_high) {
      break;
    }
    area += a_high - c;
  }
  return area / (a_high - a_low);
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) {
    return out;
  }
  for (double v : values) {
    out.mean += v;
  }
  out.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    ss += (v - out.mean) * (v - out.mean);
  }
  out.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

}  // namespace sl
