#include <gtest/gtest.h>
#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "oracles.hpp"
#include "sl/canny.hpp"

namespace {

cv::Mat gray_of(const sl::ImageRGB& img) {
  cv::Mat gray(img.height(), img.width(), CV_32F);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto c = img.at(i);
    gray.at<float>(static_cast<int>(i / img.width()), static_cast<int>(i % img.width())) =
        0.299f * c[0] + 0.587f * c[1] + 0.114f * c[2];
  }
  return gray;
}

sl::ImageRGB step_image(int w, int h, int step_x) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t v = x < step_x ? 30 : 200;
      for (int c = 0; c < 3; ++c) {
        data[(static_cast<std::size_t>(y) * w + x) * 3 + c] = v;
      }
    }
  }
  return sl::ImageRGB(w, h, std::move(data));
}

}  // namespace

TEST(Canny, ConstantImageHasNoEdges) {
  const sl::ImageRGB img(9, 7, std::vector<std::uint8_t>(9 * 7 * 3, 128));
  const auto e = sl::canny_edges(img, 0.1, 0.2);
  for (double v : e.values()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Canny, VerticalStepGivesOneColumn) {
  const auto img = step_image(20, 12, 10);
  const auto e = sl::canny_edges(img, 0.1, 0.2);
  std::vector<int> columns;
  for (int x = 0; x < 20; ++x) {
    int hits = 0;
    for (int y = 0; y < 12; ++y) {
      hits += e.at({x, y}) > 0.0;
    }
    if (hits) {
      EXPECT_EQ(hits, 12) << "column " << x;
      columns.push_back(x);
    }
  }
  ASSERT_EQ(columns.size(), 1u);
  EXPECT_TRUE(columns[0] == 9 || columns[0] == 10);
  for (double v : e.values()) {
    EXPECT_TRUE(v == 0.0 || (v >= 0.01 && v <= 0.99));
  }
}

TEST(Canny, SmoothingAndGradientMatchOpenCv) {
  const auto img = sl::testing::shapes_image(64, 48);
  const auto detail = sl::canny_detail(img, 0.1, 0.2);
  cv::Mat blurred;
  cv::GaussianBlur(gray_of(img), blurred, cv::Size(7, 7), 1.0, 1.0, cv::BORDER_REFLECT_101);
  cv::Mat dx, dy;
  cv::Sobel(blurred, dx, CV_32F, 1, 0, 3, 1.0, 0.0, cv::BORDER_REFLECT_101);
  cv::Sobel(blurred, dy, CV_32F, 0, 1, 3, 1.0, 0.0, cv::BORDER_REFLECT_101);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 64 + x;
      ASSERT_NEAR(detail.smoothed[i], blurred.at<float>(y, x), 0.05f);
      const float mag = std::hypot(dx.at<float>(y, x), dy.at<float>(y, x));
      ASSERT_NEAR(detail.magnitude[i], mag, 0.5f);
    }
  }
}

TEST(Canny, EdgeSetMatchesOpenCvCanny) {
  const auto img = sl::testing::shapes_image(160, 120);
  const auto detail = sl::canny_detail(img, 0.1, 0.2);
  cv::Mat blurred;
  cv::GaussianBlur(gray_of(img), blurred, cv::Size(7, 7), 1.0, 1.0, cv::BORDER_REFLECT_101);
  // cv::Canny on precomputed 16-bit derivatives; scale by 8 to keep precision.
  cv::Mat dx, dy;
  cv::Sobel(blurred, dx, CV_32F, 1, 0, 3, 8.0, 0.0, cv::BORDER_REFLECT_101);
  cv::Sobel(blurred, dy, CV_32F, 0, 1, 3, 8.0, 0.0, cv::BORDER_REFLECT_101);
  cv::Mat dx16, dy16;
  dx.convertTo(dx16, CV_16S);
  dy.convertTo(dy16, CV_16S);
  const double max_mag = 8.0 * detail.max_magnitude;
  cv::Mat ref;
  cv::Canny(dx16, dy16, ref, 0.1 * max_mag, 0.2 * max_mag, true);

  std::size_t differ = 0;
  std::size_t either = 0;
  for (int y = 0; y < 120; ++y) {
    for (int x = 0; x < 160; ++x) {
      const bool a = detail.edges[static_cast<std::size_t>(y) * 160 + x] != 0;
      const bool b = ref.at<std::uint8_t>(y, x) != 0;
      differ += a != b;
      either += a || b;
    }
  }
  ASSERT_GT(either, 0u);
  EXPECT_LE(static_cast<double>(differ) / (160.0 * 120.0), 0.02);
  // Stricter than the per-pixel budget: most edge pixels agree.
  EXPECT_LE(static_cast<double>(differ) / static_cast<double>(either), 0.10)
      << differ << " of " << either;
}

TEST(Canny, RejectsBadThresholds) {
  const sl::ImageRGB img(3, 3, std::vector<std::uint8_t>(27, 0));
  EXPECT_THROW(sl::canny_detail(img, 0.3, 0.2), sl::DataError);
  EXPECT_THROW(sl::canny_detail(img, -0.1, 0.2), sl::DataError);
}

TEST(Bresenham, EndpointsAndConnectivity) {
  const auto line = sl::bresenham_line({0, 0}, {7, 3});
  EXPECT_EQ(line.front(), (sl::Pixel{0, 0}));
  EXPECT_EQ(line.back(), (sl::Pixel{7, 3}));
  EXPECT_EQ(line.size(), 8u);
  for (std::size_t i = 1; i < line.size(); ++i) {
    EXPECT_LE(std::abs(line[i].x - line[i - 1].x), 1);
    EXPECT_LE(std::abs(line[i].y - line[i - 1].y), 1);
  }
  EXPECT_EQ(sl::bresenham_line({2, 2}, {2, 2}).size(), 1u);
}

TEST(InterveningContour, Definitions) {
  sl::Raster<double> edges(10, 5, 0.0);
  EXPECT_EQ(sl::intervening_contour_affinity(edges, {3, 2}, {3, 2}), 1.0);
  EXPECT_EQ(sl::intervening_contour_affinity(edges, {0, 2}, {9, 2}), 1.0);
  edges.at({5, 2}) = 0.9;
  EXPECT_NEAR(sl::intervening_contour_affinity(edges, {0, 2}, {9, 2}), 0.1, 1e-12);
  EXPECT_EQ(sl::intervening_contour_affinity(edges, {0, 0}, {9, 0}), 1.0);
}
