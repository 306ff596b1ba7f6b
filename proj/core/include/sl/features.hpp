#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sl/canny.hpp"
#include "sl/color.hpp"
#include "sl/geodesic.hpp"
#include "sl/image.hpp"
#include "sl/pivots.hpp"

namespace sl {

enum class Augmentation { Multiply, Concat };

Augmentation parse_augmentation(std::string_view text);
std::string to_string(Augmentation mode);

/// Which pixel-to-pivot cues take part in the feature vector.
struct CueSet {
  bool rgb = true;
  bool lab = true;
  bool euclidean = true;
  bool geodesic = true;
  bool intervening_contour = false;

  int count() const;
  /// Comma list of rgb, lab, euc, geo, ic.
  static CueSet parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const CueSet&, const CueSet&) = default;
};

struct AffinityConfig {
  /// Kernel bandwidths; unset means data-driven (standard deviation of the
  /// pixel-to-pivot distances of that cue, per pivot batch).
  std::optional<double> eps_rgb;
  std::optional<double> eps_lab;
  std::optional<double> eps_geo;
  double gamma_g = 0.5;
  std::vector<double> scales{0.25, 0.5, 1.0, 2.0};
  double canny_low = 0.1;
  double canny_high = 0.2;
  int k1 = 21;
  int k2 = 21;
  CueSet cues;

  /// Throws DataError on a non-positive bandwidth, gamma_g outside [0,1],
  /// empty or non-positive scales, bad Canny thresholds or pivot counts.
  void validate() const;
};

enum class CueOrigin {
  Product,  ///< multiplied per-pivot affinity
  Rgb,
  Lab,
  Euclidean,
  Geodesic,
  InterveningContour,
  RawRgb,
  RawLab,
};

struct ColumnInfo {
  CueOrigin origin;
  int pivot = -1;     ///< index into the pivot list of its batch, -1 for raw colour
  int batch = -1;
  int channel = -1;   ///< 0..2 for raw colour columns
};

struct FeatureMatrix {
  Eigen::MatrixXd values;  ///< n x d, pixels in scan order
  std::vector<ColumnInfo> columns;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Scalar cue kernels.
double color_affinity(const std::array<double, 3>& a, const std::array<double, 3>& b, double eps);
/// Mean of the per-axis variances of all pixel coordinates.
double spatial_variance(int width, int height);
double euclidean_feature(Pixel pixel, Pixel pivot, double variance, double scale);
double geodesic_affinity(double distance, double eps);

/// Per-image data shared by every pivot batch: LAB colours, geodesic step
/// costs and (when the IC cue is enabled) the Canny edge field.
class ImageContext {
 public:
  ImageContext(ImageRGB image, const AffinityConfig& cfg);

  const ImageRGB& image() const { return image_; }
  int width() const { return image_.width(); }
  int height() const { return image_.height(); }
  std::size_t pixel_count() const { return image_.pixel_count(); }
  const std::vector<LabColor>& lab() const { return lab_; }
  const GeodesicField& geodesic() const { return geodesic_; }
  /// Null unless the intervening-contour cue is enabled.
  const Raster<double>* edges() const { return edges_ ? &*edges_ : nullptr; }
  double spatial_variance() const { return spatial_variance_; }

 private:
  ImageRGB image_;
  std::vector<LabColor> lab_;
  GeodesicField geodesic_;
  std::optional<Raster<double>> edges_;
  double spatial_variance_;
};

/// Scale-independent affinities of every pixel to one batch of pivots. The
/// Euclidean cue is applied at assembly time since it depends on the scale.
struct PivotCues {
  std::vector<Pixel> pivots;
  Augmentation mode = Augmentation::Multiply;
  CueSet cues;
  /// Multiply: a single n x k block holding the product of the enabled
  /// non-spatial affinities. Concat: one n x k block per enabled non-spatial
  /// cue, in the order rgb, lab, geo, ic.
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<CueOrigin> block_origin;
  double eps_rgb = 0.0;
  double eps_lab = 0.0;
  double eps_geo = 0.0;
};

PivotCues compute_pivot_cues(const ImageContext& ctx, std::span<const Pixel> pivots,
                             const AffinityConfig& cfg, Augmentation mode, int jobs = 1);

/// Concatenates the batches' columns at one Euclidean scale. Multiply mode
/// appends the pixel's own rescaled RGB and LAB values after all pivot
/// columns.
FeatureMatrix assemble_features(const ImageContext& ctx, std::span<const PivotCues> batches,
                                double scale);

FeatureMatrix build_feature_matrix(const ImageContext& ctx, const PivotSet& pivots,
                                   const AffinityConfig& cfg, double scale, Augmentation mode,
                                   int jobs = 1);
FeatureMatrix build_feature_matrix(const ImageRGB& img, const PivotSet& pivots,
                                   const AffinityConfig& cfg, double scale, Augmentation mode);

}  // namespace sl
