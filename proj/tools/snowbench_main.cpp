// Copyright 2026 The Snowbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "snowbench/cli/commands.hpp"
#include "snowbench/core/error.hpp"
#include "snowbench/io/trace.hpp"

namespace {

using snowbench::cli::CorruptOptions;
using snowbench::cli::EvalOptions;
using snowbench::cli::MonitorOptions;
using snowbench::cli::TileOptions;

void check_rho_flag(double value, const char* flag) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw snowbench::ConfigError(std::string(flag) + " must be in [0,1), got " +
                                 std::to_string(value));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snowbench: annotation-noise injection, tiling, evaluation, and "
               "training-stop monitoring for instance-annotated mask datasets"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")
      ->envname("SNOWBENCH_THREADS");

  // corrupt
  CorruptOptions corrupt_options;
  bool segmentation = false;
  bool merge = false;
  snowbench::core::SegmentationNoise seg_defaults;
  auto* corrupt = app.add_subcommand("corrupt", "inject detection/segmentation/classification noise");
  corrupt->fallthrough();
  corrupt->add_option("--input", corrupt_options.input_manifest, "input manifest")->required();
  corrupt->add_option("--output-dir", corrupt_options.output_dir, "output directory")
      ->required()
      ->envname("SNOWBENCH_OUTPUT_DIR");
  corrupt->add_option("--detection-rho", corrupt_options.spec.detection_rho,
                      "fraction of annotations removed per class");
  corrupt->add_option("--classification-rho", corrupt_options.spec.classification_rho,
                      "fraction of labels exchanged per class");
  corrupt->add_flag("--segmentation", segmentation, "enable contour distortion");
  corrupt->add_option("--epsilon", seg_defaults.epsilon_px, "polygon simplification tolerance, px");
  corrupt->add_option("--ellipse-scale", seg_defaults.ellipse_scale, "fitted semi-axis scale");
  corrupt->add_option("--ellipse-samples", seg_defaults.ellipse_samples,
                      "vertices sampled on each fitted ellipse");
  corrupt->add_flag("--merge", merge, "merge adjacent same-class instances (implies --segmentation)");
  corrupt->add_option("--smooth-radius", seg_defaults.smooth_radius_px,
                      "closing radius for merged masks, px");
  corrupt->add_option("--seed", corrupt_options.spec.seed, "master seed");

  // tile
  TileOptions tile_options;
  auto* tile = app.add_subcommand("tile", "cut images into fixed-size tiles");
  tile->fallthrough();
  tile->add_option("--input", tile_options.input_manifest, "input manifest")->required();
  tile->add_option("--output-dir", tile_options.output_dir, "output directory")
      ->required()
      ->envname("SNOWBENCH_OUTPUT_DIR");
  tile->add_option("--size", tile_options.size, "tile size, px");
  tile->add_option("--overlap", tile_options.overlap, "tile overlap, px");

  // eval
  EvalOptions eval_options;
  std::string criterion = "coverage";
  auto* evalcmd = app.add_subcommand("eval", "evaluate predictions against ground truth");
  evalcmd->fallthrough();
  evalcmd->add_option("--gt", eval_options.gt_manifest, "ground-truth manifest")->required();
  evalcmd->add_option("--pred", eval_options.pred_manifest, "prediction manifest")->required();
  evalcmd->add_option("--output-dir", eval_options.output_dir, "report directory")
      ->required()
      ->envname("SNOWBENCH_OUTPUT_DIR");
  evalcmd->add_option("--overseg-criterion", criterion,
                      "overlap rule for over/under-segmentation: coverage or iou");

  // monitor
  MonitorOptions monitor_options;
  std::string mode = "paper-verbatim";
  int patience2 = -1;
  double min_delta2 = -1.0;
  int max_epochs2 = -1;
  auto* monitor = app.add_subcommand("monitor", "early-stopping decisions over a loss trace");
  monitor->fallthrough();
  monitor->add_option("--trace", monitor_options.trace_path, "loss trace file")->required();
  monitor->add_option("--patience", monitor_options.stage1.patience, "non-improving epochs tolerated");
  monitor->add_option("--min-delta", monitor_options.stage1.min_delta, "improvement threshold");
  monitor->add_option("--max-epochs", monitor_options.stage1.max_epochs, "epoch budget");
  monitor->add_option("--mode", mode, "improvement rule: paper-verbatim or conventional");
  monitor->add_option("--patience2", patience2, "stage-2 patience (defaults to --patience)");
  monitor->add_option("--min-delta2", min_delta2, "stage-2 threshold (defaults to --min-delta)");
  monitor->add_option("--max-epochs2", max_epochs2, "stage-2 budget (defaults to --max-epochs)");
  monitor->add_flag("--follow", monitor_options.follow, "tail the trace file as it grows");
  monitor->add_option("--poll-ms", monitor_options.poll_ms, "follow-mode poll interval");
  monitor->add_option("--follow-stages", monitor_options.follow_stages,
                      "follow mode exits after this stage stops");
  monitor->add_option("--summary-out", monitor_options.summary_path, "copy summaries to a file");
  monitor->add_option("--smoothed-out", monitor_options.smoothed_path,
                      "write Savitzky-Golay smoothed traces here");
  monitor->add_option("--smooth-window", monitor_options.smooth_window, "smoothing window (odd)");
  monitor->add_option("--smooth-order", monitor_options.smooth_order, "smoothing polynomial order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (corrupt->parsed()) {
      check_rho_flag(corrupt_options.spec.detection_rho, "--detection-rho");
      check_rho_flag(corrupt_options.spec.classification_rho, "--classification-rho");
      if (merge) {
        segmentation = true;
        seg_defaults.merge_enabled = true;
      }
      if (segmentation) corrupt_options.spec.segmentation = seg_defaults;
      corrupt_options.threads = threads;
      snowbench::cli::run_corrupt(corrupt_options, std::cout);
    } else if (tile->parsed()) {
      tile_options.threads = threads;
      snowbench::cli::run_tile(tile_options, std::cout);
    } else if (evalcmd->parsed()) {
      if (criterion == "coverage") {
        eval_options.overseg_criterion = snowbench::eval::OverlapCriterion::kCoverage;
      } else if (criterion == "iou") {
        eval_options.overseg_criterion = snowbench::eval::OverlapCriterion::kIou;
      } else {
        throw snowbench::ConfigError("--overseg-criterion must be 'coverage' or 'iou', got '" +
                                     criterion + "'");
      }
      eval_options.threads = threads;
      snowbench::cli::run_eval(eval_options, std::cout);
    } else if (monitor->parsed()) {
      monitor_options.stage1.mode = snowbench::io::mode_from_name(mode);
      monitor_options.stage2 = monitor_options.stage1;
      if (patience2 >= 0) monitor_options.stage2.patience = patience2;
      if (min_delta2 >= 0.0) monitor_options.stage2.min_delta = min_delta2;
      if (max_epochs2 >= 0) monitor_options.stage2.max_epochs = max_epochs2;
      snowbench::cli::run_monitor(monitor_options, std::cout);
    }
  } catch (const snowbench::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
