#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sl/error.hpp"

namespace sl {

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Row-major (scan) order: y first, then x.
inline bool scan_less(const Pixel& a, const Pixel& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

enum class Label : std::uint8_t { Unlabeled = 0, Foreground = 1, Background = 2 };

/// Dense single-channel raster stored in scan order.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw DimensionError("raster dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width < 1 || height < 1) {
      throw DimensionError("raster dimensions must be positive");
    }
    if (values_.size() != static_cast<std::size_t>(width) * height) {
      throw DimensionError("raster value count does not match dimensions");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool contains(Pixel p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }
  std::size_t index(Pixel p) const { return static_cast<std::size_t>(p.y) * width_ + p.x; }
  Pixel pixel(std::size_t i) const {
    return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
  }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& at(Pixel p) { return values_[index(p)]; }
  const T& at(Pixel p) const { return values_[index(p)]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using ScribbleMap = Raster<Label>;

/// Binary mask; 1 = foreground, 0 = background.
using Mask = Raster<std::uint8_t>;
using GroundTruthMask = Mask;

using Rgb = std::array<std::uint8_t, 3>;

class ImageRGB {
 public:
  ImageRGB() = default;
  ImageRGB(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::span<const std::uint8_t> data() const { return data_; }
  bool contains(Pixel p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }

  Rgb at(std::size_t i) const { return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]}; }
  Rgb at(Pixel p) const { return at(static_cast<std::size_t>(p.y) * width_ + p.x); }

  friend bool operator==(const ImageRGB&, const ImageRGB&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

std::size_t count_label(const ScribbleMap& scribbles, Label label);

/// Throws DimensionError unless the raster matches the image size.
template <typename T>
void require_same_size(const ImageRGB& img, const Raster<T>& r, const std::string& what) {
  if (img.width() != r.width() || img.height() != r.height()) {
    throw DimensionError(what + " is " + std::to_string(r.width()) + "x" +
                         std::to_string(r.height()) + " but image is " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
}

// PNG (or any format OpenCV decodes) I/O. 8-bit only.
ImageRGB load_image(const std::filesystem::path& path);
ImageRGB decode_image(std::span<const std::uint8_t> bytes);

/// Pure green (0,255,0) -> Foreground, pure red (255,0,0) -> Background,
/// everything else Unlabeled.
ScribbleMap scribbles_from_rgb(const ImageRGB& overlay);
ImageRGB scribbles_to_rgb(const ScribbleMap& scribbles);
ScribbleMap load_scribbles(const std::filesystem::path& path);
ScribbleMap load_scribbles(const std::filesystem::path& path, const ImageRGB& paired);

/// Single-channel 8-bit PNG, foreground = 255, background = 0.
void save_mask(const Mask& mask, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_mask_png(const Mask& mask);
/// Values > 127 are foreground.
Mask load_mask(const std::filesystem::path& path);

void save_image(const ImageRGB& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_image_png(const ImageRGB& img);

}  // namespace sl
