#include "sl/features.hpp"

#include <cmath>
#include <sstream>

#include "sl/error.hpp"
#include "sl/parallel.hpp"

namespace sl {

Augmentation parse_augmentation(std::string_view text) {
  if (text == "multiply") {
    return Augmentation::Multiply;
  }
  if (text == "concat") {
    return Augmentation::Concat;
  }
  throw DataError("unknown augmentation '" + std::string(text) + "' (expected multiply|concat)");
}

std::string to_string(Augmentation mode) {
  return mode == Augmentation::Multiply ? "multiply" : "concat";
}

int CueSet::count() const {
  return int{rgb} + int{lab} + int{euclidean} + int{geodesic} + int{intervening_contour};
}

CueSet CueSet::parse(std::string_view text) {
  CueSet set{false, false, false, false, false};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, end - pos);
    if (item == "rgb") {
      set.rgb = true;
    } else if (item == "lab") {
      set.lab = true;
    } else if (item == "euc") {
      set.euclidean = true;
    } else if (item == "geo") {
      set.geodesic = true;
    } else if (item == "ic") {
      set.intervening_contour = true;
    } else if (!item.empty()) {
      throw DataError("unknown feature cue '" + std::string(item) +
                      "' (expected rgb, lab, euc, geo, ic)");
    }
    pos = end + 1;
  }
  if (set.count() == 0) {
    throw DataError("at least one feature cue is required");
  }
  return set;
}

std::string CueSet::to_string() const {
  std::ostringstream out;
  const char* sep = "";
  auto add = [&](bool on, const char* name) {
    if (on) {
      out << sep << name;
      sep = ",";
    }
  };
  add(rgb, "rgb");
  add(lab, "lab");
  add(euclidean, "euc");
  add(geodesic, "geo");
  add(intervening_contour, "ic");
  return out.str();
}

void AffinityConfig::validate() const {
  for (const auto* eps : {&eps_rgb, &eps_lab, &eps_geo}) {
    if (eps->has_value() && !(**eps > 0.0)) {
      throw DataError("kernel bandwidths must be positive");
    }
  }
  if (!(gamma_g >= 0.0 && gamma_g <= 1.0)) {
    throw DataError("gamma_g must lie in [0,1]");
  }
  if (scales.empty()) {
    throw DataError("at least one Euclidean scale is required");
  }
  for (double s : scales) {
    if (!(s > 0.0)) {
      throw DataError("Euclidean scales must be positive");
    }
  }
  if (!(canny_low >= 0.0 && canny_low < canny_high)) {
    throw DataError("canny thresholds must satisfy 0 <= low < high");
  }
  if (k1 < 1 || k2 < 1) {
    throw DataError("pivot counts must be at least 1");
  }
  if (cues.count() == 0) {
    throw DataError("at least one feature cue is required");
  }
}

double color_affinity(const std::array<double, 3>& a, const std::array<double, 3>& b, double eps) {
  const double d0 = a[0] - b[0];
  const double d1 = a[1] - b[1];
  const double d2 = a[2] - b[2];
  return std::exp(-(d0 * d0 + d1 * d1 + d2 * d2) / (2.0 * eps * eps));
}

double spatial_variance(int width, int height) {
  // Variance of 0..N-1 is (N^2 - 1) / 12.
  const double vx = (static_cast<double>(width) * width - 1.0) / 12.0;
  const double vy = (static_cast<double>(height) * height - 1.0) / 12.0;
  const double v = 0.5 * (vx + vy);
  return v > 0.0 ? v : 1.0;
}

double euclidean_feature(Pixel pixel, Pixel pivot, double variance, double scale) {
  const double dx = pixel.x - pivot.x;
  const double dy = pixel.y - pivot.y;
  return std::exp(-(dx * dx + dy * dy) / (2.0 * scale * variance));
}

double geodesic_affinity(double distance, double eps) {
  return std::exp(-(distance * distance) / (2.0 * eps * eps));
}

namespace {

std::vector<double> luminance_of(const std::vector<LabColor>& lab) {
  std::vector<double> l(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i) {
    l[i] = lab[i][0];
  }
  return l;
}

std::array<double, 3> rgb_of(const ImageRGB& img, std::size_t i) {
  const Rgb c = img.at(i);
  return {double(c[0]), double(c[1]), double(c[2])};
}

/// Population standard deviation of every entry; 1 when the spread vanishes.
double bandwidth_from(const Eigen::MatrixXd& distances) {
  const double mean = distances.mean();
  const double var = (distances.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  return sd > 1e-12 ? sd : 1.0;
}

}  // namespace

ImageContext::ImageContext(ImageRGB image, const AffinityConfig& cfg)
    : image_(std::move(image)),
      lab_(rgb_to_lab(image_)),
      geodesic_(image_.width(), image_.height(), luminance_of(lab_), cfg.gamma_g),
      spatial_variance_(sl::spatial_variance(image_.width(), image_.height())) {
  if (cfg.cues.intervening_contour) {
    edges_ = canny_edges(image_, cfg.canny_low, cfg.canny_high);
  }
}

PivotCues compute_pivot_cues(const ImageContext& ctx, std::span<const Pixel> pivots,
                             const AffinityConfig& cfg, Augmentation mode, int jobs) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(ctx.pixel_count());
  const auto k = static_cast<Eigen::Index>(pivots.size());
  const CueSet cues = cfg.cues;
  const ImageRGB& img = ctx.image();
  for (const Pixel& p : pivots) {
    if (!img.contains(p)) {
      throw DataError("pivot outside the image");
    }
  }

  PivotCues out;
  out.pivots.assign(pivots.begin(), pivots.end());
  out.mode = mode;
  out.cues = cues;

  // Raw distances first; the bandwidths are statistics over the whole batch.
  Eigen::MatrixXd rgb_d, lab_d, geo_d, ic_a;
  if (cues.rgb) rgb_d.resize(n, k);
  if (cues.lab) lab_d.resize(n, k);
  if (cues.geodesic) geo_d.resize(n, k);
  if (cues.intervening_contour) ic_a.resize(n, k);

  parallel_for(static_cast<std::size_t>(k), jobs, [&](std::size_t j) {
    const Pixel q = pivots[j];
    const std::size_t qi = static_cast<std::size_t>(q.y) * img.width() + q.x;
    const auto q_rgb = rgb_of(img, qi);
    const auto& q_lab = ctx.lab()[qi];
    const auto col = static_cast<Eigen::Index>(j);
    if (cues.rgb) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto c = rgb_of(img, static_cast<std::size_t>(i));
        const double d0 = c[0] - q_rgb[0], d1 = c[1] - q_rgb[1], d2 = c[2] - q_rgb[2];
        rgb_d(i, col) = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
      }
    }
    if (cues.lab) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& c = ctx.lab()[static_cast<std::size_t>(i)];
        const double d0 = c[0] - q_lab[0], d1 = c[1] - q_lab[1], d2 = c[2] - q_lab[2];
        lab_d(i, col) = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
      }
    }
    if (cues.geodesic) {
      const Pixel seed[1] = {q};
      const auto d = ctx.geodesic().distances(seed);
      for (Eigen::Index i = 0; i < n; ++i) {
        geo_d(i, col) = d[static_cast<std::size_t>(i)];
      }
    }
    if (cues.intervening_contour) {
      const auto& edges = *ctx.edges();
      for (Eigen::Index i = 0; i < n; ++i) {
        ic_a(i, col) = intervening_contour_affinity(edges, edges.pixel(static_cast<std::size_t>(i)), q);
      }
    }
  });

  if (cues.rgb) out.eps_rgb = cfg.eps_rgb.value_or(bandwidth_from(rgb_d));
  if (cues.lab) out.eps_lab = cfg.eps_lab.value_or(bandwidth_from(lab_d));
  if (cues.geodesic) out.eps_geo = cfg.eps_geo.value_or(bandwidth_from(geo_d));

  if (mode == Augmentation::Multiply) {
    // Product of Gaussian affinities: one exp of the summed exponents.
    Eigen::ArrayXXd exponent = Eigen::ArrayXXd::Zero(n, k);
    auto add = [&](const Eigen::MatrixXd& d, double eps) {
      exponent -= d.array().square() / (2.0 * eps * eps);
    };
    if (cues.rgb) add(rgb_d, out.eps_rgb);
    if (cues.lab) add(lab_d, out.eps_lab);
    if (cues.geodesic) add(geo_d, out.eps_geo);
    Eigen::MatrixXd product = exponent.exp().matrix();
    if (cues.intervening_contour) {
      product.array() *= ic_a.array();
    }
    out.blocks.push_back(std::move(product));
    out.block_origin.push_back(CueOrigin::Product);
    return out;
  }

  auto to_affinity = [](Eigen::MatrixXd& d, double eps) {
    d = (-(d.array().square()) / (2.0 * eps * eps)).exp().matrix();
  };
  if (cues.rgb) to_affinity(rgb_d, out.eps_rgb);
  if (cues.lab) to_affinity(lab_d, out.eps_lab);
  if (cues.geodesic) to_affinity(geo_d, out.eps_geo);
  // Concat: one block per cue in the order rgb, lab, geo, ic.
  if (cues.rgb) {
    out.blocks.push_back(std::move(rgb_d));
    out.block_origin.push_back(CueOrigin::Rgb);
  }
  if (cues.lab) {
    out.blocks.push_back(std::move(lab_d));
    out.block_origin.push_back(CueOrigin::Lab);
  }
  if (cues.geodesic) {
    out.blocks.push_back(std::move(geo_d));
    out.block_origin.push_back(CueOrigin::Geodesic);
  }
  if (cues.intervening_contour) {
    out.blocks.push_back(std::move(ic_a));
    out.block_origin.push_back(CueOrigin::InterveningContour);
  }
  return out;
}

FeatureMatrix assemble_features(const ImageContext& ctx, std::span<const PivotCues> batches,
                                double scale) {
  if (batches.empty()) {
    throw DataError("feature assembly needs at least one pivot batch");
  }
  if (!(scale > 0.0)) {
    throw DataError("Euclidean scale must be positive");
  }
  const auto n = static_cast<Eigen::Index>(ctx.pixel_count());
  const int width = ctx.width();
  const double variance = ctx.spatial_variance();
  const Augmentation mode = batches.front().mode;
  const CueSet cues = batches.front().cues;

  // Euclidean affinity column for pivot q at this scale. The kernel factors
  // into a row term and a column term, so only width + height exps are needed.
  const int height = ctx.height();
  auto euclid = [&](Pixel q) {
    Eigen::VectorXd ex(width), ey(height);
    for (int x = 0; x < width; ++x) {
      ex(x) = euclidean_feature({x, q.y}, q, variance, scale);
    }
    for (int y = 0; y < height; ++y) {
      ey(y) = euclidean_feature({q.x, y}, q, variance, scale);
    }
    Eigen::VectorXd e(n);
    for (int y = 0; y < height; ++y) {
      e.segment(static_cast<Eigen::Index>(y) * width, width) = ey(y) * ex;
    }
    return e;
  };

  Eigen::Index d = 0;
  for (const auto& b : batches) {
    if (b.mode != mode || !(b.cues == cues)) {
      throw DataError("pivot batches disagree on augmentation or cue set");
    }
    const auto k = static_cast<Eigen::Index>(b.pivots.size());
    d += mode == Augmentation::Multiply ? k : k * (static_cast<Eigen::Index>(b.blocks.size()) + (cues.euclidean ? 1 : 0));
  }
  if (mode == Augmentation::Multiply) {
    d += (cues.rgb ? 3 : 0) + (cues.lab ? 3 : 0);
  }

  FeatureMatrix fm;
  fm.values.resize(n, d);
  fm.columns.reserve(static_cast<std::size_t>(d));
  Eigen::Index col = 0;

  for (std::size_t bi = 0; bi < batches.size(); ++bi) {
    const PivotCues& b = batches[bi];
    const auto k = static_cast<Eigen::Index>(b.pivots.size());
    if (mode == Augmentation::Multiply) {
      for (Eigen::Index j = 0; j < k; ++j) {
        fm.values.col(col) = b.blocks[0].col(j);
        if (cues.euclidean) {
          fm.values.col(col).array() *= euclid(b.pivots[static_cast<std::size_t>(j)]).array();
        }
        fm.columns.push_back({CueOrigin::Product, static_cast<int>(j), static_cast<int>(bi)});
        ++col;
      }
      continue;
    }
    // Concat: rgb, lab, euc, geo, ic blocks.
    auto emit_block = [&](const Eigen::MatrixXd& block, CueOrigin origin) {
      fm.values.middleCols(col, k) = block;
      for (Eigen::Index j = 0; j < k; ++j) {
        fm.columns.push_back({origin, static_cast<int>(j), static_cast<int>(bi)});
      }
      col += k;
    };
    bool euclid_done = !cues.euclidean;
    auto emit_euclid = [&] {
      Eigen::MatrixXd e(n, k);
      for (Eigen::Index j = 0; j < k; ++j) {
        e.col(j) = euclid(b.pivots[static_cast<std::size_t>(j)]);
      }
      emit_block(e, CueOrigin::Euclidean);
      euclid_done = true;
    };
    for (std::size_t s = 0; s < b.blocks.size(); ++s) {
      const bool colour = b.block_origin[s] == CueOrigin::Rgb || b.block_origin[s] == CueOrigin::Lab;
      if (!colour && !euclid_done) {
        emit_euclid();
      }
      emit_block(b.blocks[s], b.block_origin[s]);
    }
    if (!euclid_done) {
      emit_euclid();
    }
  }

  if (mode == Augmentation::Multiply) {
    const ImageRGB& img = ctx.image();
    if (cues.rgb) {
      for (int c = 0; c < 3; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
          fm.values(i, col) = img.at(static_cast<std::size_t>(i))[c] / 255.0;
        }
        fm.columns.push_back({CueOrigin::RawRgb, -1, -1, c});
        ++col;
      }
    }
    if (cues.lab) {
      for (int c = 0; c < 3; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
          const double v = ctx.lab()[static_cast<std::size_t>(i)][c];
          fm.values(i, col) = c == 0 ? v / 100.0 : (v + 128.0) / 255.0;
        }
        fm.columns.push_back({CueOrigin::RawLab, -1, -1, c});
        ++col;
      }
    }
  }
  return fm;
}

FeatureMatrix build_feature_matrix(const ImageContext& ctx, const PivotSet& pivots,
                                   const AffinityConfig& cfg, double scale, Augmentation mode,
                                   int jobs) {
  const std::vector<Pixel> all = pivots.all();
  const PivotCues cues[1] = {compute_pivot_cues(ctx, all, cfg, mode, jobs)};
  return assemble_features(ctx, cues, scale);
}

FeatureMatrix build_feature_matrix(const ImageRGB& img, const PivotSet& pivots,
                                   const AffinityConfig& cfg, double scale, Augmentation mode) {
  const ImageContext ctx(img, cfg);
  return build_feature_matrix(ctx, pivots, cfg, scale, mode);
}

}  // namespace sl
