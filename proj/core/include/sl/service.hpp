#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sl/image.hpp"
#include "sl/segmenter.hpp"

namespace sl {

struct StrokePolyline {
  Label label = Label::Foreground;
  std::vector<Pixel> points;
  double radius = 3.0;
};

/// Stamps a disk of the stroke radius at every point and at <= 1 px spacing
/// along each segment. Throws DataError when a point lies outside the image.
ScribbleMap rasterize_strokes(const std::vector<StrokePolyline>& strokes, int width, int height);

/// Parses `[{"label":"fg","points":[[x,y],...],"radius":r}, ...]`.
std::vector<StrokePolyline> parse_strokes_json(const std::string& json_array);

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8742;  ///< 0 binds any free port
  std::chrono::seconds session_ttl{30 * 60};
  std::size_t max_upload_bytes = 16u << 20;
  std::optional<std::filesystem::path> static_dir;
  SegmenterParams defaults;
};

/// Port from SL_PORT, else 8742.
int service_port_from_env();

/// HTTP session API. Routes:
///   POST /sessions                           raw PNG body -> 201 {id,width,height}
///   POST /sessions/{id}/strokes?mode=        JSON strokes -> result summary
///   PUT  /sessions/{id}/groundtruth.png      raw PNG mask -> 204
///   GET  /sessions/{id}/mask.png | overlay.png
///   GET  /healthz
class SegmentationService {
 public:
  explicit SegmentationService(ServiceConfig config);
  ~SegmentationService();
  SegmentationService(const SegmentationService&) = delete;
  SegmentationService& operator=(const SegmentationService&) = delete;

  /// Binds the socket; returns the bound port. Throws Error on failure.
  int bind();
  /// Serves until stop(). Call bind() first.
  void serve();
  void stop();
  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sl
