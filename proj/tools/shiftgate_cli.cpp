// shiftgate: distribution-shift measurement and safety gating for image
// datasets.
//
// Exit status: 0 on success (and when every gated frame is safe), 2 when the
// gate rejects at least one frame, 1 on any operational error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftgate/dataset.hpp"
#include "shiftgate/distance.hpp"
#include "shiftgate/errors.hpp"
#include "shiftgate/experiments.hpp"
#include "shiftgate/histogram.hpp"
#include "shiftgate/image.hpp"
#include "shiftgate/image_io.hpp"
#include "shiftgate/report.hpp"
#include "shiftgate/safety_gate.hpp"

namespace sg = shiftgate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnsafe = 2;

struct GlobalOptions {
  std::string space = "rgb";
  double epsilon = sg::kDefaultEpsilon;
  std::uint64_t seed = 0;
  std::string out;
};

// Writes to --out when given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw sg::Error(sg::ErrorCode::kUnwritablePath, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void close(const std::string& path) {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw sg::Error(sg::ErrorCode::kUnwritablePath, "failed writing " + path);
    }
  }

 private:
  std::ofstream file_;
};

sg::NamingConfig naming_from(const std::string& path) {
  return path.empty() ? sg::NamingConfig{} : sg::NamingConfig::from_json_file(path);
}

std::string summary_json(const sg::ErrorEvaluation& e) {
  nlohmann::ordered_json j;
  j["shift"] = e.shift;
  j["count"] = e.summary.count;
  j["mae"] = e.summary.mae;
  j["mape"] = e.summary.mape ? nlohmann::ordered_json(*e.summary.mape)
                             : nlohmann::ordered_json(nullptr);
  j["mse"] = e.summary.mse;
  j["rmse"] = e.summary.rmse;
  j["zero_targets"] = e.summary.zero_targets;
  return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure pixel-intensity distribution shift between images and gate predictions"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--space", g.space, "Colour space for histograms: rgb|yuv")
      ->check(CLI::IsMember({"rgb", "yuv"}, CLI::ignore_case));
  app.add_option("--epsilon", g.epsilon, "Relative-entropy smoothing term, in counts")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for every randomised selection");
  app.add_option("--out", g.out, "Output file (defaults to stdout for text outputs)");

  // shift
  auto* shift_cmd = app.add_subcommand("shift", "Apply a saturating intensity shift to an image");
  std::string shift_in;
  int shift_value = 0;
  shift_cmd->add_option("--in", shift_in, "Input JPEG/PNG")->required();
  shift_cmd->add_option("--shift", shift_value, "Signed shift in [-255, 255]")
      ->required()
      ->allow_extra_args(false);

  // preprocess
  auto* pre_cmd = app.add_subcommand("preprocess", "Crop rows, resize, optionally convert to YUV");
  std::string pre_in;
  sg::PreprocessSpec pre_spec;
  pre_cmd->add_option("--in", pre_in, "Input JPEG/PNG")->required();
  pre_cmd->add_option("--crop-top", pre_spec.crop_top_rows, "Rows removed from the top")
      ->capture_default_str();
  pre_cmd->add_option("--crop-bottom", pre_spec.crop_bottom_rows, "Rows removed from the bottom")
      ->capture_default_str();
  pre_cmd->add_option("--width", pre_spec.target_width, "Target width")->capture_default_str();
  pre_cmd->add_option("--height", pre_spec.target_height, "Target height")->capture_default_str();

  // hist
  auto* hist_cmd = app.add_subcommand("hist", "Write the 256-bin intensity histogram as CSV");
  std::string hist_in;
  std::optional<int> hist_channel;
  hist_cmd->add_option("--in", hist_in, "Input JPEG/PNG")->required();
  hist_cmd->add_option("--channel", hist_channel, "Histogram a single channel (0, 1 or 2)")
      ->check(CLI::Range(0, 2));

  // dist
  auto* dist_cmd = app.add_subcommand("dist", "Histogram intersection, relative entropy and "
                                              "Bhattacharyya distance between two images");
  std::string dist_ref, dist_query, dist_format = "csv";
  dist_cmd->add_option("--ref", dist_ref, "Reference (training-side) image")->required();
  dist_cmd->add_option("--query", dist_query, "Query image")->required();
  dist_cmd->add_option("--format", dist_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Distance from an image to its own shifted copies");
  std::string sweep_in, sweep_svg;
  int sweep_from = sg::kDefaultSweepFrom, sweep_to = sg::kDefaultSweepTo, sweep_step = 1;
  int sweep_safe = 40;
  sweep_cmd->add_option("--in", sweep_in, "Input JPEG/PNG")->required();
  sweep_cmd->add_option("--from", sweep_from, "First shift")->capture_default_str();
  sweep_cmd->add_option("--to", sweep_to, "Last shift")->capture_default_str();
  sweep_cmd->add_option("--step", sweep_step, "Shift increment")->capture_default_str();
  sweep_cmd->add_option("--svg", sweep_svg, "Also render an SVG plot to this path");
  sweep_cmd->add_option("--safe-shift", sweep_safe, "Position of the safe-range markers")
      ->capture_default_str();

  // pairs
  auto* pairs_cmd = app.add_subcommand("pairs", "Seeded random-pair table across shifts");
  std::string pairs_dataset, pairs_naming, pairs_metric = "hi", pairs_svg;
  std::size_t pairs_n = 50;
  std::vector<int> pairs_shifts = sg::kTableShifts;
  bool pairs_table_text = false;
  pairs_cmd->add_option("--dataset", pairs_dataset, "Dataset directory")->required();
  pairs_cmd->add_option("--naming", pairs_naming, "JSON naming/key mapping file");
  pairs_cmd->add_option("--n", pairs_n, "Number of pairs")->capture_default_str();
  pairs_cmd->add_option("--metric", pairs_metric, "hi|kl|db")
      ->check(CLI::IsMember({"hi", "kl", "db"}));
  pairs_cmd->add_option("--shifts", pairs_shifts, "Shifts applied to the second image")
      ->delimiter(',');
  pairs_cmd->add_option("--svg", pairs_svg, "Also render an SVG plot to this path");
  pairs_cmd->add_flag("--table", pairs_table_text,
                      "Print a two-decimal text table to stdout (requires --out)");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "Derive gate thresholds from reference images");
  std::vector<std::string> cal_refs;
  std::string cal_dataset, cal_naming;
  int cal_sr = 40;
  std::size_t cal_max_refs = 0;
  cal_cmd->add_option("--refs", cal_refs, "Reference images");
  cal_cmd->add_option("--dataset", cal_dataset, "Use dataset frames as references");
  cal_cmd->add_option("--naming", cal_naming, "JSON naming/key mapping file");
  cal_cmd->add_option("--max-refs", cal_max_refs,
                      "Seeded sample of at most this many dataset frames (0 = all)");
  cal_cmd->add_option("--sr", cal_sr, "Safe shift range")->capture_default_str()
      ->check(CLI::Range(0, 255));

  // gate
  auto* gate_cmd = app.add_subcommand("gate", "Safe/unsafe decision per query frame");
  std::string gate_thresholds, gate_ref, gate_dataset, gate_naming, gate_policy = "any";
  std::vector<std::string> gate_queries;
  std::optional<double> gate_hi, gate_kl, gate_db;
  int gate_shift = 0;
  gate_cmd->add_option("--thresholds", gate_thresholds, "Thresholds JSON from `calibrate`");
  gate_cmd->add_option("--hi-min", gate_hi, "Literal histogram-intersection floor");
  gate_cmd->add_option("--kl-max", gate_kl, "Literal relative-entropy ceiling");
  gate_cmd->add_option("--db-max", gate_db, "Literal Bhattacharyya-distance ceiling");
  gate_cmd->add_option("--ref", gate_ref,
                       "Reference image (default: seeded random frame of --dataset)");
  gate_cmd->add_option("--query", gate_queries, "Query images, gated in the order given");
  gate_cmd->add_option("--dataset", gate_dataset, "Gate every dataset frame in index order");
  gate_cmd->add_option("--naming", gate_naming, "JSON naming/key mapping file");
  gate_cmd->add_option("--shift", gate_shift, "Shift applied to each query before gating")
      ->check(CLI::Range(-255, 255));
  gate_cmd->add_option("--policy", gate_policy, "any|all")->check(CLI::IsMember({"any", "all"}));

  // errors
  auto* err_cmd = app.add_subcommand("errors", "Steering error of external predictions");
  std::string err_dataset, err_naming, err_predictions, err_svg;
  int err_shift = 0;
  err_cmd->add_option("--dataset", err_dataset, "Dataset directory (ground truth)")->required();
  err_cmd->add_option("--naming", err_naming, "JSON naming/key mapping file");
  err_cmd->add_option("--predictions", err_predictions, "`index,value` prediction CSV")
      ->required();
  err_cmd->add_option("--shift", err_shift, "Shift the predictions were produced under")
      ->check(CLI::Range(-255, 255));
  err_cmd->add_option("--svg", err_svg, "Also render truth/prediction overlay SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    const sg::ColorSpace space = sg::parse_color_space(g.space);

    if (*shift_cmd) {
      if (g.out.empty()) throw sg::Error(sg::ErrorCode::kInvalidArgument, "shift needs --out");
      sg::save_image(sg::shift_image(sg::load_image(shift_in), sg::ShiftAmount(shift_value)),
                     g.out);
      return kExitOk;
    }

    if (*pre_cmd) {
      if (g.out.empty()) {
        throw sg::Error(sg::ErrorCode::kInvalidArgument, "preprocess needs --out");
      }
      pre_spec.output_space = space;
      sg::save_image(sg::preprocess(sg::load_image(pre_in), pre_spec), g.out);
      return kExitOk;
    }

    if (*hist_cmd) {
      sg::Image image = sg::load_image(hist_in);
      if (space == sg::ColorSpace::kYuv) image = sg::rgb_to_yuv(image);
      const sg::IntensityHistogram hist =
          hist_channel ? sg::build_channel_histograms(image)[static_cast<std::size_t>(*hist_channel)]
                       : sg::build_histogram(image);
      Output out(g.out);
      sg::write_histogram_csv(out.stream(), hist);
      out.close(g.out);
      return kExitOk;
    }

    if (*dist_cmd) {
      const auto report =
          sg::distance_report(sg::load_image(dist_ref), sg::load_image(dist_query), space, g.epsilon);
      Output out(g.out);
      if (dist_format == "json") {
        out.stream() << sg::to_json(report) << '\n';
      } else {
        out.stream() << sg::distance_csv_header() << '\n' << sg::to_csv_row(report) << '\n';
      }
      out.close(g.out);
      return kExitOk;
    }

    if (*sweep_cmd) {
      const auto results =
          sg::sweep(sg::load_image(sweep_in), sweep_from, sweep_to, sweep_step, space, g.epsilon);
      Output out(g.out);
      sg::write_sweep_csv(out.stream(), results);
      out.close(g.out);
      if (!sweep_svg.empty()) {
        sg::SvgOptions svg;
        svg.safe_shift = sweep_safe;
        svg.title = std::string("Distance vs shift (") + std::string(sg::to_string(space)) + ")";
        sg::emit_report(results, sg::ReportFormat::kSvg, sweep_svg, svg);
      }
      return kExitOk;
    }

    if (*pairs_cmd) {
      const auto dataset = sg::load_dataset(pairs_dataset, naming_from(pairs_naming));
      const auto table = sg::pair_table(dataset, pairs_n, pairs_shifts,
                                        sg::parse_metric(pairs_metric), space, g.epsilon, g.seed);
      Output out(g.out);
      sg::write_pair_table_csv(out.stream(), table);
      out.close(g.out);
      if (pairs_table_text && !g.out.empty()) std::cout << sg::format_pair_table(table);
      if (!pairs_svg.empty()) sg::emit_report(table, sg::ReportFormat::kSvg, pairs_svg);
      return kExitOk;
    }

    if (*cal_cmd) {
      std::vector<sg::Image> refs;
      for (const auto& path : cal_refs) refs.push_back(sg::load_image(path));
      if (!cal_dataset.empty()) {
        const auto dataset = sg::load_dataset(cal_dataset, naming_from(cal_naming));
        std::vector<std::size_t> picks;
        if (cal_max_refs == 0 || cal_max_refs >= dataset.size()) {
          for (std::size_t i = 0; i < dataset.size(); ++i) picks.push_back(i);
        } else {
          sg::PairSampler sampler(g.seed);
          for (std::size_t i = 0; i < cal_max_refs; ++i) {
            picks.push_back(sampler.uniform_index(dataset.size()));
          }
        }
        for (const std::size_t i : picks) refs.push_back(sg::load_image(dataset[i].image_path));
      }
      const auto thresholds = sg::calibrate(refs, cal_sr, space, g.epsilon);
      Output out(g.out);
      out.stream() << sg::to_json(thresholds) << '\n';
      out.close(g.out);
      return kExitOk;
    }

    if (*gate_cmd) {
      sg::SafetyThresholds thresholds;
      if (!gate_thresholds.empty()) {
        thresholds = sg::load_thresholds(gate_thresholds);
      } else {
        if (!gate_hi || !gate_kl || !gate_db) {
          throw sg::Error(sg::ErrorCode::kInvalidArgument,
                          "gate needs --thresholds or all of --hi-min, --kl-max, --db-max");
        }
        thresholds.space = space;
        thresholds.epsilon = g.epsilon;
      }
      if (gate_hi) thresholds.hi_min = *gate_hi;
      if (gate_kl) thresholds.kl_max = *gate_kl;
      if (gate_db) thresholds.db_max = *gate_db;
      thresholds.validate();

      std::vector<sg::DriveRecord> dataset;
      if (!gate_dataset.empty()) dataset = sg::load_dataset(gate_dataset, naming_from(gate_naming));

      sg::Image reference;
      if (!gate_ref.empty()) {
        reference = sg::load_image(gate_ref);
      } else if (!dataset.empty()) {
        sg::PairSampler sampler(g.seed);
        reference = sg::load_image(dataset[sampler.uniform_index(dataset.size())].image_path);
      } else {
        throw sg::Error(sg::ErrorCode::kInvalidArgument, "gate needs --ref or --dataset");
      }

      const sg::ShiftAmount shift(gate_shift);
      std::vector<sg::FrameSource> frames;
      for (std::size_t i = 0; i < gate_queries.size(); ++i) {
        frames.push_back({static_cast<std::int64_t>(i), [path = gate_queries[i], shift] {
                            return sg::shift_image(sg::load_image(path), shift);
                          }});
      }
      for (const auto& record : dataset) {
        frames.push_back({record.frame_index, [path = record.image_path, shift] {
                            return sg::shift_image(sg::load_image(path), shift);
                          }});
      }
      const auto policy = sg::parse_gate_policy(gate_policy);
      const auto result = sg::gate_stream(thresholds, reference, frames, policy);
      Output out(g.out);
      sg::write_decisions_csv(out.stream(), result, policy);
      out.close(g.out);
      for (const auto& f : result.frames) {
        if (!f.error.empty()) std::cerr << "frame " << f.frame << ": " << f.error << '\n';
      }
      return result.first_unsafe ? kExitUnsafe : kExitOk;
    }

    if (*err_cmd) {
      const auto dataset = sg::load_dataset(err_dataset, naming_from(err_naming));
      std::ifstream in(err_predictions, std::ios::binary);
      if (!in) throw sg::Error(sg::ErrorCode::kIoError, "cannot open " + err_predictions);
      const auto predictions = sg::read_indexed_csv(in);
      const auto evaluation =
          sg::evaluate_errors(dataset, predictions, sg::ShiftAmount(err_shift));
      if (!g.out.empty()) sg::emit_report(evaluation, sg::ReportFormat::kCsv, g.out);
      if (!err_svg.empty()) sg::emit_report(evaluation, sg::ReportFormat::kSvg, err_svg);
      std::cout << summary_json(evaluation) << '\n';
      if (!evaluation.summary.mape) {
        std::cerr << "note: MAPE not reported, " << evaluation.summary.zero_targets
                  << " zero ground-truth value(s)\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
