#include "sl/service.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "sl/error.hpp"
#include "sl/metrics.hpp"
#include "sl/overlay.hpp"

namespace sl {

using nlohmann::json;

namespace {

void stamp_disk(ScribbleMap& map, double cx, double cy, double radius, Label label) {
  const int x0 = static_cast<int>(std::floor(cx - radius));
  const int x1 = static_cast<int>(std::ceil(cx + radius));
  const int y0 = static_cast<int>(std::floor(cy - radius));
  const int y1 = static_cast<int>(std::ceil(cy + radius));
  const double r2 = radius * radius + 1e-9;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= r2 && map.contains({x, y})) {
        map.at({x, y}) = label;
      }
    }
  }
}

}  // namespace

ScribbleMap rasterize_strokes(const std::vector<StrokePolyline>& strokes, int width, int height) {
  ScribbleMap map(width, height, Label::Unlabeled);
  for (const auto& s : strokes) {
    if (s.label == Label::Unlabeled) {
      throw DataError("stroke label must be fg or bg");
    }
    if (!(s.radius >= 0.0) || !std::isfinite(s.radius)) {
      throw DataError("stroke radius must be a nonnegative number");
    }
    for (const Pixel& p : s.points) {
      if (!map.contains(p)) {
        throw DataError("stroke point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                        ") lies outside the image");
      }
    }
    if (s.points.empty()) {
      continue;
    }
    stamp_disk(map, s.points[0].x, s.points[0].y, s.radius, s.label);
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      const Pixel a = s.points[i - 1];
      const Pixel b = s.points[i];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const int steps = std::max(1, static_cast<int>(std::ceil(len)));
      for (int t = 1; t <= steps; ++t) {
        const double f = static_cast<double>(t) / steps;
        stamp_disk(map, a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), s.radius, s.label);
      }
    }
  }
  return map;
}

namespace {

std::vector<StrokePolyline> strokes_from(const json& arr) {
  if (!arr.is_array()) {
    throw DataError("strokes must be a JSON array");
  }
  std::vector<StrokePolyline> out;
  for (const auto& item : arr) {
    StrokePolyline s;
    const std::string label = item.at("label").get<std::string>();
    if (label == "fg") {
      s.label = Label::Foreground;
    } else if (label == "bg") {
      s.label = Label::Background;
    } else {
      throw DataError("stroke label must be fg or bg, got '" + label + "'");
    }
    if (item.contains("radius")) {
      s.radius = item.at("radius").get<double>();
    }
    for (const auto& pt : item.at("points")) {
      if (!pt.is_array() || pt.size() != 2) {
        throw DataError("stroke points must be [x, y] pairs");
      }
      s.points.push_back({static_cast<int>(std::lround(pt[0].get<double>())),
                          static_cast<int>(std::lround(pt[1].get<double>()))});
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<StrokePolyline> parse_strokes_json(const std::string& json_array) {
  try {
    return strokes_from(json::parse(json_array));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed strokes: ") + e.what());
  }
}

int service_port_from_env() {
  if (const char* env = std::getenv("SL_PORT")) {
    char* end = nullptr;
    const long port = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && port >= 0 && port <= 65535) {
      return static_cast<int>(port);
    }
    throw DataError(std::string("SL_PORT is not a valid port: ") + env);
  }
  return 8742;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Session {
  std::string id;
  ImageRGB image;
  Clock::time_point created;
  std::atomic<Clock::time_point> last_used;
  std::atomic<bool> busy{false};

  // Guarded by `mutex`; held only to read or publish, never while computing.
  mutable std::mutex mutex;
  std::optional<Mask> ground_truth;
  std::optional<SessionState> state;
  std::vector<std::uint8_t> mask_png;
  std::vector<std::uint8_t> overlay_png;
};

/// Releases the in-flight flag on scope exit.
struct BusyGuard {
  std::atomic<bool>& flag;
  ~BusyGuard() { flag = false; }
};

SegmenterParams params_from(const json& body, SegmenterParams p) {
  if (!body.is_object()) {
    return p;
  }
  auto take_int = [&](const char* key, int& out) {
    if (body.contains(key)) out = body.at(key).get<int>();
  };
  auto take_double = [&](const char* key, double& out) {
    if (body.contains(key)) out = body.at(key).get<double>();
  };
  take_int("eigvecs", p.m);
  take_int("pivots_fg", p.affinity.k1);
  take_int("pivots_bg", p.affinity.k2);
  take_int("bins", p.bins);
  take_double("lambda", p.lambda);
  take_double("gamma_g", p.affinity.gamma_g);
  if (body.contains("scales")) {
    p.affinity.scales = body.at("scales").get<std::vector<double>>();
  }
  if (body.contains("augment")) {
    p.mode = parse_augmentation(body.at("augment").get<std::string>());
  }
  if (body.contains("features")) {
    p.affinity.cues = CueSet::parse(body.at("features").get<std::string>());
  }
  p.validate();
  return p;
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

std::vector<std::uint8_t> bytes_of(const std::string& body) {
  return {body.begin(), body.end()};
}

}  // namespace

struct SegmentationService::Impl {
  ServiceConfig config;
  httplib::Server server;
  mutable std::mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::mt19937_64 id_rng{std::random_device{}()};

  explicit Impl(ServiceConfig c) : config(std::move(c)) {
    config.defaults.validate();
    server.set_payload_max_length(config.max_upload_bytes);
    if (config.static_dir && !server.set_mount_point("/", config.static_dir->string())) {
      throw DataError("static directory does not exist: " + config.static_dir->string());
    }
    routes();
  }

  std::string new_id() {
    std::ostringstream out;
    out << std::hex;
    out.fill('0');
    for (int i = 0; i < 2; ++i) {
      out.width(16);
      out << id_rng();
    }
    return out.str();
  }

  void purge_expired() {
    const auto now = Clock::now();
    std::lock_guard lock(sessions_mutex);
    std::erase_if(sessions, [&](const auto& kv) {
      return !kv.second->busy && now - kv.second->last_used.load() > config.session_ttl;
    });
  }

  std::shared_ptr<Session> find(const std::string& id) {
    purge_expired();
    std::lock_guard lock(sessions_mutex);
    const auto it = sessions.find(id);
    if (it == sessions.end()) {
      return nullptr;
    }
    it->second->last_used = Clock::now();
    return it->second;
  }

  void routes() {
    server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
      std::size_t count = 0;
      {
        std::lock_guard lock(sessions_mutex);
        count = sessions.size();
      }
      res.set_content(json{{"status", "ok"}, {"sessions", count}}.dump(), "application/json");
    });

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      if (req.body.size() > config.max_upload_bytes) {
        send_error(res, 413, "image exceeds the upload limit");
        return;
      }
      ImageRGB image;
      try {
        image = decode_image(bytes_of(req.body));
      } catch (const Error& e) {
        send_error(res, 400, e.what());
        return;
      }
      purge_expired();
      auto session = std::make_shared<Session>();
      session->image = std::move(image);
      session->created = Clock::now();
      session->last_used = session->created;
      {
        std::lock_guard lock(sessions_mutex);
        do {
          session->id = new_id();
        } while (sessions.contains(session->id));
        sessions.emplace(session->id, session);
      }
      res.status = 201;
      res.set_content(json{{"id", session->id},
                           {"width", session->image.width()},
                           {"height", session->image.height()}}
                          .dump(),
                      "application/json");
    });

    server.Put(R"(/sessions/([0-9a-f]+)/groundtruth\.png)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto session = find(req.matches[1]);
                 if (!session) {
                   send_error(res, 404, "unknown session");
                   return;
                 }
                 Mask gt;
                 try {
                   const ImageRGB decoded = decode_image(bytes_of(req.body));
                   require_same_size(session->image, Mask(decoded.width(), decoded.height()),
                                     "ground truth");
                   gt = Mask(decoded.width(), decoded.height());
                   for (std::size_t i = 0; i < gt.size(); ++i) {
                     gt[i] = decoded.at(i)[0] > 127 ? 1 : 0;
                   }
                 } catch (const Error& e) {
                   send_error(res, 400, e.what());
                   return;
                 }
                 std::lock_guard lock(session->mutex);
                 session->ground_truth = std::move(gt);
                 if (session->state) {
                   session->overlay_png = encode_image_png(render_overlay(
                       session->image, session->state->last->mask, &*session->ground_truth));
                 }
                 res.status = 204;
               });

    server.Post(R"(/sessions/([0-9a-f]+)/strokes)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  post_strokes(req, res);
                });

    server.Get(R"(/sessions/([0-9a-f]+)/(mask|overlay)\.png)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto session = find(req.matches[1]);
                 if (!session) {
                   send_error(res, 404, "unknown session");
                   return;
                 }
                 std::lock_guard lock(session->mutex);
                 if (!session->state) {
                   send_error(res, 409, "no segmentation result yet");
                   return;
                 }
                 const auto& png = req.matches[2] == "mask" ? session->mask_png : session->overlay_png;
                 res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
               });
  }

  void post_strokes(const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    if (!session) {
      send_error(res, 404, "unknown session");
      return;
    }
    const std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "append";
    if (mode != "append" && mode != "replace") {
      send_error(res, 400, "mode must be append or replace");
      return;
    }
    bool expected = false;
    if (!session->busy.compare_exchange_strong(expected, true)) {
      send_error(res, 409, "a request for this session is already in flight");
      return;
    }
    BusyGuard guard{session->busy};

    std::vector<StrokePolyline> strokes;
    json body;
    SegmenterParams params = config.defaults;
    try {
      body = req.body.empty() ? json::object() : json::parse(req.body);
      strokes = strokes_from(body.is_array() ? body : body.value("strokes", json::array()));
      params = params_from(body, params);
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("malformed request: ") + e.what());
      return;
    } catch (const Error& e) {
      send_error(res, 400, e.what());
      return;
    }

    std::optional<SessionState> current;
    std::optional<Mask> gt;
    {
      std::lock_guard lock(session->mutex);
      current = session->state;
      gt = session->ground_truth;
    }

    const auto start = Clock::now();
    try {
      const ScribbleMap added =
          rasterize_strokes(strokes, session->image.width(), session->image.height());
      if (mode == "replace" || !current) {
        current = start_session(session->image, added, params);
      } else {
        segment_incremental(*current, added);
      }
    } catch (const AnnotationError& e) {
      send_error(res, 422, e.what());
      return;
    } catch (const DataError& e) {
      send_error(res, 400, e.what());
      return;
    } catch (const Error& e) {
      send_error(res, 500, e.what());
      return;
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();

    const SegmentationResult& result = *current->last;
    auto mask_png = encode_mask_png(result.mask);
    auto overlay_png =
        encode_image_png(render_overlay(session->image, result.mask, gt ? &*gt : nullptr));

    json out{{"id", session->id},
             {"mode", mode},
             {"width", session->image.width()},
             {"height", session->image.height()},
             {"foreground_pixels", count_label(current->scribbles, Label::Foreground)},
             {"background_pixels", count_label(current->scribbles, Label::Background)},
             {"pivots", current->pivots.size()},
             {"seconds", seconds},
             {"mask_url", "/sessions/" + session->id + "/mask.png"},
             {"overlay_url", "/sessions/" + session->id + "/overlay.png"},
             {"warnings", result.warnings}};
    json timings = json::object();
    for (const auto& [stage, s] : result.timings) {
      timings[stage] = s;
    }
    out["timings"] = timings;
    if (gt) {
      const Confusion c = confusion(result.mask, *gt);
      out["jaccard"] = jaccard(c);
      out["fscore"] = fscore(c);
    }
    {
      std::lock_guard lock(session->mutex);
      session->state = std::move(current);
      session->mask_png = std::move(mask_png);
      session->overlay_png = std::move(overlay_png);
    }
    session->last_used = Clock::now();
    res.set_content(out.dump(), "application/json");
  }
};

SegmentationService::SegmentationService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

SegmentationService::~SegmentationService() {
  stop();
}

int SegmentationService::bind() {
  const int port = impl_->config.port == 0
                       ? impl_->server.bind_to_any_port(impl_->config.host)
                       : (impl_->server.bind_to_port(impl_->config.host, impl_->config.port)
                              ? impl_->config.port
                              : -1);
  if (port < 0) {
    throw Error("cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  return port;
}

void SegmentationService::serve() {
  impl_->server.listen_after_bind();
}

void SegmentationService::stop() {
  if (impl_) {
    impl_->server.stop();
  }
}

std::size_t SegmentationService::session_count() const {
  std::lock_guard lock(impl_->sessions_mutex);
  return impl_->sessions.size();
}

}  // namespace sl
