#include <gtest/gtest.h>

#include "sl/color.hpp"

namespace {

struct LabCase {
  sl::Rgb rgb;
  sl::LabColor lab;
};

// Reference values from scikit-image's rgb2lab (D65, 2 degree observer).
const LabCase kReference[] = {
    {{128, 128, 128}, {53.585013, -0.001473, 0.002791}},
    {{255, 0, 0}, {53.240588, 80.092308, 67.202751}},
    {{0, 255, 0}, {87.735099, -86.183030, 83.179703}},
    {{0, 0, 255}, {32.295673, 79.185591, -107.857300}},
    {{200, 120, 40}, {57.912293, 25.295217, 54.082782}},
    {{10, 60, 200}, {32.841633, 41.431087, -75.483191}},
};

}  // namespace

TEST(RgbToLab, White) {
  const auto lab = sl::rgb_to_lab(sl::Rgb{255, 255, 255});
  EXPECT_NEAR(lab[0], 100.0, 1e-6);
  EXPECT_LE(std::abs(lab[1]), 0.01);
  EXPECT_LE(std::abs(lab[2]), 0.01);
}

TEST(RgbToLab, Black) {
  const auto lab = sl::rgb_to_lab(sl::Rgb{0, 0, 0});
  EXPECT_NEAR(lab[0], 0.0, 1e-9);
  EXPECT_NEAR(lab[1], 0.0, 1e-9);
  EXPECT_NEAR(lab[2], 0.0, 1e-9);
}

TEST(RgbToLab, MatchesReferenceConverter) {
  for (const auto& c : kReference) {
    const auto lab = sl::rgb_to_lab(c.rgb);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(lab[k], c.lab[k], 0.1) << int(c.rgb[0]) << "," << int(c.rgb[1]) << "," << int(c.rgb[2]);
    }
  }
}

TEST(RgbToLab, ImageOverloadIsPerPixel) {
  const sl::ImageRGB img(2, 1, std::vector<std::uint8_t>{128, 128, 128, 255, 0, 0});
  const auto lab = sl::rgb_to_lab(img);
  ASSERT_EQ(lab.size(), 2u);
  EXPECT_EQ(lab[1], sl::rgb_to_lab(sl::Rgb{255, 0, 0}));
}
