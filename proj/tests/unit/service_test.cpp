#include <thread>

#include <gtest/gtest.h>

#include "sl/error.hpp"
#include "sl/image.hpp"
#include "sl/metrics.hpp"
#include "sl/service.hpp"

// After the Eigen-based headers: httplib pulls in <resolv.h>, whose _res
// macro collides with Eigen parameter names.
#include <httplib.h>
#include <json.hpp>

using nlohmann::json;

namespace {

constexpr int kW = 64;
constexpr int kH = 48;

// Orange disk of radius 12 at (32, 24) on a teal background.
sl::ImageRGB disk_image() {
  std::vector<std::uint8_t> data(kW * kH * 3);
  for (int y = 0; y < kH; ++y) {
    for (int x = 0; x < kW; ++x) {
      const bool in = (x - 32) * (x - 32) + (y - 24) * (y - 24) <= 144;
      const sl::Rgb c = in ? sl::Rgb{230, 140, 30} : sl::Rgb{20, 120, 130};
      std::copy(c.begin(), c.end(), data.begin() + 3 * (y * kW + x));
    }
  }
  return sl::ImageRGB(kW, kH, std::move(data));
}

sl::Mask disk_mask() {
  sl::Mask m(kW, kH, 0);
  for (int y = 0; y < kH; ++y) {
    for (int x = 0; x < kW; ++x) {
      m.at({x, y}) = (x - 32) * (x - 32) + (y - 24) * (y - 24) <= 144;
    }
  }
  return m;
}

std::string as_body(const std::vector<std::uint8_t>& bytes) {
  return {bytes.begin(), bytes.end()};
}

const char* kTwoStrokes =
    R"([{"label":"fg","points":[[28,24],[36,24]],"radius":2},
        {"label":"bg","points":[[4,4],[60,4]],"radius":2}])";

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    sl::ServiceConfig config;
    config.host = "127.0.0.1";
    config.port = 0;
    config.max_upload_bytes = 64 << 10;
    config.defaults.m = 30;
    service_ = std::make_unique<sl::SegmentationService>(config);
    port_ = service_->bind();
    thread_ = std::thread([this] { service_->serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(120);
  }

  void TearDown() override {
    service_->stop();
    thread_.join();
  }

  std::string create_session() {
    const auto res = client_->Post("/sessions", as_body(sl::encode_image_png(disk_image())), "image/png");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body).at("id").get<std::string>();
  }

  httplib::Result post_strokes(const std::string& id, const std::string& body,
                               const std::string& mode = "append") {
    return client_->Post("/sessions/" + id + "/strokes?mode=" + mode, body, "application/json");
  }

  std::unique_ptr<sl::SegmentationService> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace

TEST_F(ServiceTest, HealthAndSessionIds) {
  const auto a = create_session();
  const auto b = create_session();
  EXPECT_NE(a, b);
  const auto res = client_->Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("sessions"), 2);
  EXPECT_EQ(service_->session_count(), 2u);
}

TEST_F(ServiceTest, BadUploads) {
  auto png = as_body(sl::encode_image_png(disk_image()));
  const auto truncated = client_->Post("/sessions", png.substr(0, png.size() / 2), "image/png");
  ASSERT_TRUE(truncated);
  EXPECT_EQ(truncated->status, 400);
  const auto huge = client_->Post("/sessions", std::string(100 << 10, 'x'), "image/png");
  ASSERT_TRUE(huge);
  EXPECT_EQ(huge->status, 413);
}

TEST_F(ServiceTest, StrokesSegmentTheDisk) {
  const auto id = create_session();
  const auto gt_res = client_->Put("/sessions/" + id + "/groundtruth.png",
                                   as_body(sl::encode_mask_png(disk_mask())), "image/png");
  ASSERT_TRUE(gt_res);
  EXPECT_EQ(gt_res->status, 204);

  const auto res = post_strokes(id, kTwoStrokes);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto summary = json::parse(res->body);
  EXPECT_GE(summary.at("jaccard").get<double>(), 0.95);
  EXPECT_EQ(summary.at("mask_url"), "/sessions/" + id + "/mask.png");

  const auto mask_res = client_->Get("/sessions/" + id + "/mask.png");
  ASSERT_TRUE(mask_res);
  ASSERT_EQ(mask_res->status, 200);
  const auto decoded = sl::decode_image(
      std::span(reinterpret_cast<const std::uint8_t*>(mask_res->body.data()), mask_res->body.size()));
  sl::Mask mask(kW, kH);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = decoded.at(i)[0] > 127;
  }
  EXPECT_GE(sl::jaccard(sl::confusion(mask, disk_mask())), 0.95);

  // Appending nothing leaves the result alone.
  const auto again = post_strokes(id, "[]");
  ASSERT_TRUE(again);
  ASSERT_EQ(again->status, 200);
  const auto mask_again = client_->Get("/sessions/" + id + "/mask.png");
  EXPECT_EQ(mask_again->body, mask_res->body);
}

TEST_F(ServiceTest, OverlayTintsFalsePositivesRed) {
  const auto id = create_session();
  // Ground truth says nothing is foreground, so every mask pixel is a false positive.
  ASSERT_EQ(client_->Put("/sessions/" + id + "/groundtruth.png",
                         as_body(sl::encode_mask_png(sl::Mask(kW, kH, 0))), "image/png")
                ->status,
            204);
  ASSERT_EQ(post_strokes(id, kTwoStrokes)->status, 200);
  const auto res = client_->Get("/sessions/" + id + "/overlay.png");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);
  const auto overlay = sl::decode_image(
      std::span(reinterpret_cast<const std::uint8_t*>(res->body.data()), res->body.size()));
  // Disk centre (230,140,30) blended with (220,0,0).
  EXPECT_EQ(overlay.at(sl::Pixel{32, 24}), (sl::Rgb{225, 70, 15}));
}

TEST_F(ServiceTest, ErrorStatuses) {
  const auto id = create_session();
  EXPECT_EQ(client_->Get("/sessions/" + id + "/mask.png")->status, 409);
  EXPECT_EQ(client_->Get("/sessions/00ff/mask.png")->status, 404);
  EXPECT_EQ(post_strokes("00ff", kTwoStrokes)->status, 404);
  const auto fg_only = post_strokes(id, R"([{"label":"fg","points":[[32,24]],"radius":2}])");
  EXPECT_EQ(fg_only->status, 422);
  EXPECT_EQ(post_strokes(id, "[{\"label\":", "append")->status, 400);
  EXPECT_EQ(post_strokes(id, kTwoStrokes, "merge")->status, 400);
  EXPECT_EQ(post_strokes(id, R"([{"label":"fg","points":[[99,24]]}])")->status, 400);
}

TEST(Strokes, ParseJson) {
  const auto s = sl::parse_strokes_json(R"([{"label":"bg","points":[[1.4,2.6],[5,2]],"radius":1.5}])");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].label, sl::Label::Background);
  EXPECT_EQ(s[0].points, (std::vector<sl::Pixel>{{1, 3}, {5, 2}}));
  EXPECT_EQ(s[0].radius, 1.5);
  EXPECT_EQ(sl::parse_strokes_json(R"([{"label":"fg","points":[]}])")[0].radius, 3.0);
  EXPECT_THROW(sl::parse_strokes_json(R"([{"label":"x","points":[]}])"), sl::DataError);
  EXPECT_THROW(sl::parse_strokes_json("{"), sl::DataError);
  EXPECT_THROW(sl::parse_strokes_json(R"([{"label":"fg","points":[[1]]}])"), sl::DataError);
}

TEST(Strokes, Rasterize) {
  const sl::StrokePolyline dot{sl::Label::Foreground, {{5, 5}}, 0.0};
  const auto one = sl::rasterize_strokes({dot}, 10, 10);
  EXPECT_EQ(sl::count_label(one, sl::Label::Foreground), 1u);

  const sl::StrokePolyline line{sl::Label::Background, {{0, 0}, {9, 0}}, 0.0};
  const auto row = sl::rasterize_strokes({line}, 10, 3);
  for (int x = 0; x < 10; ++x) {
    EXPECT_EQ(row.at({x, 0}), sl::Label::Background);
  }
  EXPECT_EQ(sl::count_label(row, sl::Label::Background), 10u);

  const sl::StrokePolyline disk{sl::Label::Foreground, {{5, 5}}, 2.0};
  EXPECT_EQ(sl::count_label(sl::rasterize_strokes({disk}, 11, 11), sl::Label::Foreground), 13u);
  // Later strokes overwrite earlier ones.
  const auto both = sl::rasterize_strokes({disk, {sl::Label::Background, {{5, 5}}, 0.0}}, 11, 11);
  EXPECT_EQ(both.at({5, 5}), sl::Label::Background);
  EXPECT_THROW(sl::rasterize_strokes({{sl::Label::Foreground, {{10, 0}}, 1.0}}, 10, 10), sl::DataError);
}
