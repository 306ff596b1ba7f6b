#include "sl/image.hpp"

#include <algorithm>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace sl {

ImageRGB::ImageRGB(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw DimensionError("image dimensions must be positive");
  }
  if (data_.size() != 3 * static_cast<std::size_t>(width) * height) {
    throw DimensionError("image data length must be 3*width*height");
  }
}

std::size_t count_label(const ScribbleMap& scribbles, Label label) {
  const auto v = scribbles.values();
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), label));
}

namespace {

ImageRGB from_mat(const cv::Mat& mat, const std::string& source) {
  if (mat.empty()) {
    throw DataError("cannot decode image: " + source);
  }
  if (mat.depth() != CV_8U) {
    throw DataError("unsupported bit depth (only 8-bit images are accepted): " + source);
  }
  const int w = mat.cols;
  const int h = mat.rows;
  const int ch = mat.channels();
  if (ch != 1 && ch != 3 && ch != 4) {
    throw DataError("unsupported channel count " + std::to_string(ch) + ": " + source);
  }
  std::vector<std::uint8_t> data(3 * static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < w; ++x) {
      const std::size_t o = 3 * (static_cast<std::size_t>(y) * w + x);
      if (ch == 1) {
        data[o] = data[o + 1] = data[o + 2] = row[x];
      } else {
        // OpenCV stores BGR(A).
        data[o] = row[ch * x + 2];
        data[o + 1] = row[ch * x + 1];
        data[o + 2] = row[ch * x];
      }
    }
  }
  return ImageRGB(w, h, std::move(data));
}

cv::Mat to_bgr_mat(const ImageRGB& img) {
  cv::Mat mat(img.height(), img.width(), CV_8UC3);
  const auto d = img.data();
  for (int y = 0; y < img.height(); ++y) {
    std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t o = 3 * (static_cast<std::size_t>(y) * img.width() + x);
      row[3 * x] = d[o + 2];
      row[3 * x + 1] = d[o + 1];
      row[3 * x + 2] = d[o];
    }
  }
  return mat;
}

cv::Mat to_gray_mat(const Mask& mask) {
  cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = mask.at({x, y}) ? 255 : 0;
    }
  }
  return mat;
}

void write_or_throw(const std::filesystem::path& path, const cv::Mat& mat) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw DataError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) {
    throw DataError("cannot write " + path.string());
  }
}

std::vector<std::uint8_t> encode_png(const cv::Mat& mat) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", mat, out)) {
    throw DataError("PNG encoding failed");
  }
  return out;
}

}  // namespace

ImageRGB load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("file not found: " + path.string());
  }
  return from_mat(cv::imread(path.string(), cv::IMREAD_UNCHANGED), path.string());
}

ImageRGB decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) {
    throw DataError("cannot decode image: empty buffer");
  }
  cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat mat;
  try {
    mat = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception&) {
    mat.release();
  }
  return from_mat(mat, "<memory>");
}

ScribbleMap scribbles_from_rgb(const ImageRGB& overlay) {
  ScribbleMap map(overlay.width(), overlay.height(), Label::Unlabeled);
  for (std::size_t i = 0; i < overlay.pixel_count(); ++i) {
    const Rgb c = overlay.at(i);
    if (c == Rgb{0, 255, 0}) {
      map[i] = Label::Foreground;
    } else if (c == Rgb{255, 0, 0}) {
      map[i] = Label::Background;
    }
  }
  return map;
}

ImageRGB scribbles_to_rgb(const ScribbleMap& scribbles) {
  std::vector<std::uint8_t> data(3 * scribbles.size(), 0);
  for (std::size_t i = 0; i < scribbles.size(); ++i) {
    if (scribbles[i] == Label::Foreground) {
      data[3 * i + 1] = 255;
    } else if (scribbles[i] == Label::Background) {
      data[3 * i] = 255;
    }
  }
  return ImageRGB(scribbles.width(), scribbles.height(), std::move(data));
}

ScribbleMap load_scribbles(const std::filesystem::path& path) {
  return scribbles_from_rgb(load_image(path));
}

ScribbleMap load_scribbles(const std::filesystem::path& path, const ImageRGB& paired) {
  ScribbleMap map = load_scribbles(path);
  require_same_size(paired, map, "scribble file " + path.string());
  return map;
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  write_or_throw(path, to_gray_mat(mask));
}

std::vector<std::uint8_t> encode_mask_png(const Mask& mask) { return encode_png(to_gray_mat(mask)); }

Mask load_mask(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("file not found: " + path.string());
  }
  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) {
    throw DataError("cannot decode mask: " + path.string());
  }
  if (mat.depth() != CV_8U) {
    throw DataError("unsupported bit depth (only 8-bit masks are accepted): " + path.string());
  }
  // Colour masks are reduced to their first channel; binary masks carry the
  // same value in every channel.
  Mask mask(mat.cols, mat.rows, std::uint8_t{0});
  const int ch = mat.channels();
  for (int y = 0; y < mat.rows; ++y) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      mask.at({x, y}) = row[ch * x] > 127 ? 1 : 0;
    }
  }
  return mask;
}

void save_image(const ImageRGB& img, const std::filesystem::path& path) {
  write_or_throw(path, to_bgr_mat(img));
}

std::vector<std::uint8_t> encode_image_png(const ImageRGB& img) { return encode_png(to_bgr_mat(img)); }

}  // namespace sl
