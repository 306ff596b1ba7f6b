#include "sl/evaluate.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace sl {

namespace {

SampleResult evaluate_sample(const DatasetSample& sample, const EvalOptions& options) {
  SampleResult r;
  r.id = sample.id;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ImageRGB img = load_image(sample.image);
    const ScribbleMap scribbles = load_scribbles(sample.scribbles, img);
    const Mask gt = load_mask(sample.ground_truth);
    require_same_size(img, gt, "ground truth");
    Mask mask;
    if (options.mode == EvalMode::SinglePass) {
      mask = segment_single_pass(img, scribbles, options.params).mask;
    } else {
      RobotTrace trace =
          run_robot(img, gt, scribbles, options.params, options.max_strokes, options.robot_mode);
      mask = std::move(trace.final_mask);
      r.avg_strokes = avg_strokes(trace.jaccards(), options.band_low, options.band_high);
    }
    const Confusion c = confusion(mask, gt);
    r.jaccard = jaccard(c);
    r.fscore = fscore(c);
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

EvalReport evaluate_dataset(const DatasetManifest& manifest, const EvalOptions& options) {
  options.params.validate();
  EvalReport report;
  report.mode = options.mode;
  std::vector<double> ji, fs, strokes;
  for (const DatasetSample& sample : manifest.samples) {
    SampleResult r = evaluate_sample(sample, options);
    if (r.ok) {
      ++report.evaluated;
      ji.push_back(r.jaccard);
      fs.push_back(r.fscore);
      if (r.avg_strokes) {
        strokes.push_back(*r.avg_strokes);
      }
    } else {
      ++report.failed;
    }
    report.samples.push_back(std::move(r));
  }
  report.jaccard = mean_std(ji);
  report.fscore = mean_std(fs);
  if (options.mode == EvalMode::Robot) {
    report.avg_strokes = mean_std(strokes);
  }
  return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out,
                      const std::vector<std::string>& header) {
  for (const auto& line : header) {
    out << "# " << line << '\n';
  }
  const bool robot = report.mode == EvalMode::Robot;
  out << "id,jaccard,fscore" << (robot ? ",avg_strokes" : "") << '\n';
  const auto precision = out.precision(10);
  for (const auto& s : report.samples) {
    out << s.id << ',';
    if (s.ok) {
      out << s.jaccard << ',' << s.fscore;
      if (robot) {
        out << ',' << s.avg_strokes.value_or(0.0);
      }
    } else {
      out << ',' << (robot ? "," : "");
    }
    out << '\n';
  }
  out << "mean," << report.jaccard.mean << ',' << report.fscore.mean;
  if (robot) {
    out << ',' << report.avg_strokes->mean;
  }
  out << "\nstd," << report.jaccard.stddev << ',' << report.fscore.stddev;
  if (robot) {
    out << ',' << report.avg_strokes->stddev;
  }
  out << '\n';
  out.precision(precision);
}

void print_report_table(const EvalReport& report, std::ostream& out) {
  const bool robot = report.mode == EvalMode::Robot;
  out << std::left << std::setw(24) << "id" << std::right << std::setw(10) << "jaccard"
      << std::setw(10) << "fscore";
  if (robot) {
    out << std::setw(12) << "strokes";
  }
  out << std::setw(10) << "sec" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& s : report.samples) {
    out << std::left << std::setw(24) << s.id << std::right;
    if (!s.ok) {
      out << "  FAILED: " << s.error << '\n';
      continue;
    }
    out << std::setw(10) << s.jaccard << std::setw(10) << s.fscore;
    if (robot) {
      out << std::setw(12) << s.avg_strokes.value_or(0.0);
    }
    out << std::setw(10) << std::setprecision(2) << s.seconds << std::setprecision(4) << '\n';
  }
  out << "JI " << report.jaccard.mean << " +/- " << report.jaccard.stddev << "   Fs "
      << report.fscore.mean << " +/- " << report.fscore.stddev;
  if (robot) {
    out << "   strokes " << report.avg_strokes->mean << " +/- " << report.avg_strokes->stddev;
  }
  out << "   (population std; " << report.evaluated << " evaluated, " << report.failed
      << " failed)\n";
  out.unsetf(std::ios::floatfield);
}

}  // namespace sl
