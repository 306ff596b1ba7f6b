// slseg: command-line front end for scribble segmentation, dataset evaluation,
// the robot user, the two-Gaussian toy, timing sweeps and the HTTP service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sl/dataset.hpp"
#include "sl/error.hpp"
#include "sl/evaluate.hpp"
#include "sl/exact.hpp"
#include "sl/metrics.hpp"
#include "sl/overlay.hpp"
#include "sl/robot.hpp"
#include "sl/segmenter.hpp"
#include "sl/service.hpp"
#include "sl/toy.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

struct CommonFlags {
  int eigvecs = 100;
  int pivots_fg = 21;
  int pivots_bg = 21;
  double lambda = 100.0;
  int bins = 50;
  double gamma_g = 0.5;
  std::vector<double> scales{0.25, 0.5, 1.0, 2.0};
  std::string features = "rgb,lab,euc,geo";
  std::vector<std::string> ablate;
  int strokes = sl::kMaxRobotStrokes;
  std::string band = "0.85:0.98";
  std::uint64_t seed = 0;
  int jobs = 0;
};

void add_common(CLI::App& app, CommonFlags& f) {
  app.add_option("--eigvecs", f.eigvecs, "Number of eigenfunctions m")->capture_default_str();
  app.add_option("--pivots-fg", f.pivots_fg, "Foreground pivots k1")->capture_default_str();
  app.add_option("--pivots-bg", f.pivots_bg, "Background pivots k2")->capture_default_str();
  app.add_option("--lambda", f.lambda, "Label penalty weight")->capture_default_str();
  app.add_option("--bins", f.bins, "Histogram bins per dimension")->capture_default_str();
  app.add_option("--gamma-g", f.gamma_g, "Geodesic gradient weight in [0,1]")->capture_default_str();
  app.add_option("--scales", f.scales, "Euclidean cue scales")->delimiter(',')->capture_default_str();
  app.add_option("--features", f.features, "Cues: rgb,lab,euc,geo,ic")->capture_default_str();
  app.add_option("--ablate", f.ablate, "Override, e.g. features=rgb,lab, augment=concat, intercept=0, clamp=0");
  app.add_option("--strokes", f.strokes, "Robot stroke budget")->capture_default_str();
  app.add_option("--band", f.band, "avg-strokes accuracy band low:high")->capture_default_str();
  app.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", f.jobs, "Worker threads (0 = all)")->capture_default_str();
}

std::pair<double, double> parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw sl::DataError("--band must look like low:high");
  }
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw sl::DataError("--band must look like low:high");
  }
}

sl::SegmenterParams make_params(const CommonFlags& f, const std::string& augment) {
  sl::SegmenterParams p;
  p.m = f.eigvecs;
  p.bins = f.bins;
  p.lambda = f.lambda;
  p.jobs = f.jobs;
  p.mode = sl::parse_augmentation(augment);
  p.affinity.k1 = f.pivots_fg;
  p.affinity.k2 = f.pivots_bg;
  p.affinity.gamma_g = f.gamma_g;
  p.affinity.scales = f.scales;
  p.affinity.cues = sl::CueSet::parse(f.features);
  for (const auto& item : f.ablate) {
    const auto eq = item.find('=');
    const std::string key = item.substr(0, eq);
    const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
    if (key == "features") {
      p.affinity.cues = sl::CueSet::parse(value);
    } else if (key == "augment" || key == "mode") {
      p.mode = sl::parse_augmentation(value);
    } else if (key == "intercept" || key == "clamp") {
      if (value != "0" && value != "1") {
        throw sl::DataError("--ablate " + key + "= takes 0 or 1");
      }
      (key == "intercept" ? p.intercept : p.clamp_seeds) = value == "1";
    } else {
      throw sl::DataError("unknown --ablate key '" + key +
                          "' (expected features=, augment=, intercept= or clamp=)");
    }
  }
  p.validate();
  return p;
}

std::vector<std::string> describe(const sl::SegmenterParams& p, const CommonFlags& f) {
  std::ostringstream scales;
  for (std::size_t i = 0; i < p.affinity.scales.size(); ++i) {
    scales << (i ? "," : "") << p.affinity.scales[i];
  }
  std::ostringstream line;
  line << "eigvecs=" << p.m << " pivots_fg=" << p.affinity.k1 << " pivots_bg=" << p.affinity.k2
       << " lambda=" << p.lambda << " bins=" << p.bins << " gamma_g=" << p.affinity.gamma_g
       << " scales=" << scales.str() << " mode=" << sl::to_string(p.mode)
       << " features=" << p.affinity.cues.to_string() << " strokes=" << f.strokes
       << " intercept=" << p.intercept << " clamp=" << p.clamp_seeds << " band=" << f.band
       << " seed=" << f.seed;
  return {line.str()};
}

void print_timings(const sl::SegmentationResult& r) {
  for (const auto& [stage, s] : r.timings) {
    std::cout << "  " << stage << ": " << s << " s\n";
  }
  std::cout << "  total: " << r.total_seconds() << " s\n";
  for (const auto& w : r.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw sl::DataError("cannot write " + path);
  }
  return out;
}

void dump_features(const sl::ImageRGB& img, const sl::ScribbleMap& scribbles,
                   const sl::SegmenterParams& p, const std::string& path) {
  const sl::ImageContext ctx(img, p.affinity);
  const auto pivots = sl::sample_pivots(scribbles, p.affinity.k1, p.affinity.k2);
  const double scale = p.affinity.scales.front();
  const sl::FeatureMatrix fm = sl::build_feature_matrix(ctx, pivots, p.affinity, scale, p.mode, p.jobs);
  auto out = open_out(path);
  out << "# rows=" << fm.rows() << " cols=" << fm.cols() << " mode=" << sl::to_string(p.mode)
      << " scale=" << scale << '\n';
  static const char* names[] = {"product", "rgb", "lab", "euc", "geo", "ic", "raw_rgb", "raw_lab"};
  for (std::size_t c = 0; c < fm.columns.size(); ++c) {
    const auto& info = fm.columns[c];
    out << (c ? "," : "") << names[static_cast<int>(info.origin)];
    if (info.pivot >= 0) {
      out << '_' << info.batch << '_' << info.pivot;
    } else {
      out << '_' << info.channel;
    }
  }
  out << '\n';
  out.precision(10);
  for (Eigen::Index r = 0; r < fm.rows(); ++r) {
    for (Eigen::Index c = 0; c < fm.cols(); ++c) {
      out << (c ? "," : "") << fm.values(r, c);
    }
    out << '\n';
  }
}

sl::SegmentationService* g_service = nullptr;

void on_signal(int) {
  if (g_service) {
    g_service->stop();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded Laplacian scribble segmentation"};
  app.require_subcommand(1);
  CommonFlags flags;

  // segment
  auto* seg = app.add_subcommand("segment", "Segment one image from scribbles");
  std::string image_path, scribble_path, out_path, overlay_path, gt_path, features_path;
  std::string seg_mode = "multiply";
  seg->add_option("image", image_path, "Input image")->required();
  seg->add_option("scribbles", scribble_path, "Scribble image (green FG, red BG)")->required();
  seg->add_option("out", out_path, "Output mask PNG")->required();
  seg->add_option("--overlay", overlay_path, "Write a boundary overlay PNG");
  seg->add_option("--gt", gt_path, "Ground truth mask for metrics and tinted overlay");
  seg->add_option("--dump-features", features_path, "Write the first-scale feature matrix as CSV");
  seg->add_option("--mode", seg_mode, "Feature augmentation: multiply|concat")->capture_default_str();
  add_common(*seg, flags);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a dataset manifest");
  std::string manifest_path, csv_path;
  std::string eval_mode = "single", augment = "multiply", robot_kind = "naive";
  eval->add_option("manifest", manifest_path, "Tab-separated manifest")->required();
  eval->add_option("--out", csv_path, "Report CSV (default: stdout table only)");
  eval->add_option("--mode", eval_mode, "single|robot")->capture_default_str();
  eval->add_option("--augment", augment, "Feature augmentation: multiply|concat")->capture_default_str();
  eval->add_option("--robot", robot_kind, "Robot re-segmentation: naive|incremental")->capture_default_str();
  add_common(*eval, flags);

  // robot
  auto* robot = app.add_subcommand("robot", "Run the simulated user on one image");
  std::string trace_path, robot_mode = "multiply";
  bool incremental = false;
  robot->add_option("image", image_path, "Input image")->required();
  robot->add_option("scribbles", scribble_path, "Initial scribbles")->required();
  robot->add_option("gt", gt_path, "Ground truth mask")->required();
  robot->add_option("--trace", trace_path, "Trace CSV");
  robot->add_option("--mode", robot_mode, "Feature augmentation: multiply|concat")->capture_default_str();
  robot->add_flag("--incremental", incremental, "Refine incrementally instead of re-segmenting");
  add_common(*robot, flags);

  // toy
  auto* toy = app.add_subcommand("toy", "Two-Gaussian eigenfunction vs exact comparison");
  int toy_n = 400;
  std::string scatter_path;
  sl::ToyParams toy_params;
  toy->add_option("-n,--n", toy_n, "Number of points")->capture_default_str();
  toy->add_option("--scatter", scatter_path, "Scatter CSV");
  toy->add_option("--exact-eps", toy_params.exact_eps, "Dense graph bandwidth")->capture_default_str();
  add_common(*toy, flags);
  toy->get_option("--eigvecs")->default_val(toy_params.m);

  // bench
  auto* bench = app.add_subcommand("bench", "Timing sweep of exact and eigenfunction paths");
  std::string bench_path;
  std::vector<int> sizes(std::begin(sl::kBenchSizes), std::end(sl::kBenchSizes));
  bench->add_option("--out", bench_path, "CSV output (default stdout)");
  bench->add_option("--sizes", sizes, "Point counts")->delimiter(',')->capture_default_str();
  add_common(*bench, flags);
  bench->get_option("--eigvecs")->default_val(toy_params.m);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP session service");
  sl::ServiceConfig service_config;
  std::string static_dir;
  serve->add_option("--host", service_config.host, "Bind address")->capture_default_str();
  serve->add_option("--port", service_config.port, "Port (default SL_PORT or 8742)");
  serve->add_option("--static", static_dir, "Directory served at /");
  add_common(*serve, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*seg) {
      const auto params = make_params(flags, seg_mode);
      const sl::ImageRGB img = sl::load_image(image_path);
      const sl::ScribbleMap scribbles = sl::load_scribbles(scribble_path, img);
      if (!features_path.empty()) {
        dump_features(img, scribbles, params, features_path);
      }
      const auto result = sl::segment_single_pass(img, scribbles, params);
      sl::save_mask(result.mask, out_path);
      std::optional<sl::Mask> gt;
      if (!gt_path.empty()) {
        gt = sl::load_mask(gt_path);
        sl::require_same_size(img, *gt, "ground truth");
        const auto c = sl::confusion(result.mask, *gt);
        std::cout << "jaccard " << sl::jaccard(c) << "  fscore " << sl::fscore(c) << '\n';
      }
      if (!overlay_path.empty()) {
        sl::save_image(sl::render_overlay(img, result.mask, gt ? &*gt : nullptr), overlay_path);
      }
      std::cout << "wrote " << out_path << '\n';
      print_timings(result);
    } else if (*eval) {
      const auto params = make_params(flags, augment);
      sl::EvalOptions opts;
      opts.params = params;
      if (eval_mode == "single") {
        opts.mode = sl::EvalMode::SinglePass;
      } else if (eval_mode == "robot") {
        opts.mode = sl::EvalMode::Robot;
      } else {
        throw CLI::ValidationError("--mode", "expected single or robot");
      }
      if (robot_kind == "naive") {
        opts.robot_mode = sl::RobotMode::Naive;
      } else if (robot_kind == "incremental") {
        opts.robot_mode = sl::RobotMode::Incremental;
      } else {
        throw CLI::ValidationError("--robot", "expected naive or incremental");
      }
      opts.max_strokes = flags.strokes;
      std::tie(opts.band_low, opts.band_high) = parse_band(flags.band);
      const auto manifest = sl::load_dataset(manifest_path);
      const auto report = sl::evaluate_dataset(manifest, opts);
      sl::print_report_table(report, std::cout);
      if (!csv_path.empty()) {
        auto out = open_out(csv_path);
        auto header = describe(params, flags);
        header.push_back("eval_mode=" + eval_mode + " robot=" + robot_kind +
                         " std=population evaluated=" + std::to_string(report.evaluated) +
                         " failed=" + std::to_string(report.failed));
        sl::write_report_csv(report, out, header);
      }
    } else if (*robot) {
      const auto params = make_params(flags, robot_mode);
      const auto [low, high] = parse_band(flags.band);
      const sl::ImageRGB img = sl::load_image(image_path);
      const sl::ScribbleMap scribbles = sl::load_scribbles(scribble_path, img);
      const sl::Mask gt = sl::load_mask(gt_path);
      const auto trace = sl::run_robot(img, gt, scribbles, params, flags.strokes,
                                       incremental ? sl::RobotMode::Incremental : sl::RobotMode::Naive);
      sl::write_trace_csv(trace, std::cout);
      std::cout << "avg_strokes " << sl::avg_strokes(trace.jaccards(), low, high) << '\n';
      if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        for (const auto& line : describe(params, flags)) {
          out << "# " << line << (incremental ? " robot=incremental" : " robot=naive") << '\n';
        }
        sl::write_trace_csv(trace, out);
      }
    } else if (*toy) {
      toy_params.m = flags.eigvecs;
      toy_params.bins = flags.bins;
      toy_params.lambda = flags.lambda;
      const auto data = sl::make_two_gaussians(toy_n, flags.seed);
      const auto run = sl::run_toy(data, toy_params);
      std::cout << "n " << toy_n << "  eigvecs " << toy_params.m << "  seed " << flags.seed << '\n';
      std::cout << "eigenfunction path: " << run.seconds_efn << " s, accuracy " << run.accuracy_efn
                << '\n';
      if (run.agreement) {
        std::cout << "exact path: " << run.seconds_exact << " s\n";
        std::cout << "agreement " << *run.agreement << '\n';
      } else {
        std::cout << "exact path: refused (n > " << sl::kExactMaxPoints << ")\n";
      }
      if (!scatter_path.empty()) {
        auto out = open_out(scatter_path);
        out << "# n=" << toy_n << " eigvecs=" << toy_params.m << " bins=" << toy_params.bins
            << " lambda=" << toy_params.lambda << " exact_eps=" << toy_params.exact_eps
            << " seed=" << flags.seed << '\n';
        sl::write_toy_scatter(data, run, out);
      }
    } else if (*bench) {
      toy_params.m = flags.eigvecs;
      toy_params.bins = flags.bins;
      toy_params.lambda = flags.lambda;
      const auto rows = sl::run_bench(sizes, flags.seed, toy_params);
      std::ostringstream csv;
      csv << "# eigvecs=" << toy_params.m << " bins=" << toy_params.bins
          << " lambda=" << toy_params.lambda << " exact_eps=" << toy_params.exact_eps
          << " seed=" << flags.seed << '\n';
      sl::write_bench_csv(rows, csv);
      if (bench_path.empty()) {
        std::cout << csv.str();
      } else {
        open_out(bench_path) << csv.str();
      }
    } else if (*serve) {
      service_config.defaults = make_params(flags, "multiply");
      if (!serve->get_option("--port")->count()) {
        service_config.port = sl::service_port_from_env();
      }
      if (!static_dir.empty()) {
        service_config.static_dir = static_dir;
      }
      sl::SegmentationService service(service_config);
      const int port = service.bind();
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << service_config.host << ':' << port << std::endl;
      service.serve();
      g_service = nullptr;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const sl::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericError;
  }
  return kOk;
}
