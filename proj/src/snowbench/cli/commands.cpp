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

#include "snowbench/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "snowbench/core/error.hpp"
#include "snowbench/corruption/noise.hpp"
#include "snowbench/io/container.hpp"
#include "snowbench/io/corruption_log.hpp"
#include "snowbench/io/manifest.hpp"
#include "snowbench/io/report.hpp"
#include "snowbench/io/tiling.hpp"
#include "snowbench/io/trace.hpp"
#include "staging.hpp"

namespace snowbench::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string weight_string(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", w);
  return buf;
}

}  // namespace

void run_corrupt(const CorruptOptions& options, std::ostream& out) {
  core::validate_noise_spec(options.spec);
  core::Dataset dataset = io::load_dataset(options.input_manifest, /*allow_other=*/false,
                                           options.threads);

  auto [corrupted, log] = corrupt::apply_noise_pipeline(dataset, options.spec, options.threads);
  corrupted.manifest.provenance =
      core::Provenance{options.spec, fs::path(options.input_manifest).string()};

  StagingDir staging(options.output_dir);
  io::save_dataset(staging.path(), corrupted);
  io::write_corruption_log(staging.path() / "corruption_log.jsonl", log);
  staging.commit();

  ordered_json summary;
  summary["command"] = "corrupt";
  summary["status"] = "ok";
  summary["images"] = corrupted.images.size();
  summary["removed"] = log.removals.size();
  summary["distorted"] = log.distortions.size();
  summary["merged"] = log.merges.size();
  summary["relabeled"] = log.relabels.size();
  summary["output_manifest"] = (fs::path(options.output_dir) / "manifest.json").string();
  summary["corruption_log"] = (fs::path(options.output_dir) / "corruption_log.jsonl").string();
  out << summary.dump() << "\n";
}

void run_tile(const TileOptions& options, std::ostream& out) {
  if (options.size < 1) throw ConfigError("--size must be >= 1");
  if (options.overlap >= options.size) {
    throw ConfigError("--overlap must be smaller than --size");
  }
  core::Dataset dataset = io::load_dataset(options.input_manifest, /*allow_other=*/false,
                                           options.threads);
  const std::map<core::ClassId, std::uint64_t> counts =
      core::class_instance_counts(dataset.images);

  core::Dataset tiled;
  tiled.manifest.dataset = dataset.manifest.dataset;
  tiled.manifest.num_classes = dataset.manifest.num_classes;
  tiled.manifest.class_names = dataset.manifest.class_names;

  std::vector<core::AnnotatedImage> all_tiles;
  for (const core::AnnotatedImage& img : dataset.images) {
    const io::TileSet tiles = io::tile_image(img, options.size, options.overlap);
    for (const io::Tile& t : tiles.tiles) all_tiles.push_back(t.image);
  }
  const std::vector<double> weights = io::sampling_weights(all_tiles, counts);
  for (std::size_t i = 0; i < all_tiles.size(); ++i) {
    all_tiles[i].metadata["sampling_weight"] = weight_string(weights[i]);
  }
  tiled.images = std::move(all_tiles);

  StagingDir staging(options.output_dir);
  io::save_dataset(staging.path(), tiled);
  staging.commit();

  ordered_json summary;
  summary["command"] = "tile";
  summary["status"] = "ok";
  summary["images"] = dataset.images.size();
  summary["tiles"] = tiled.images.size();
  summary["output_manifest"] = (fs::path(options.output_dir) / "manifest.json").string();
  out << summary.dump() << "\n";
}

void run_eval(const EvalOptions& options, std::ostream& out) {
  core::Dataset gt = io::load_dataset(options.gt_manifest, /*allow_other=*/false, options.threads);
  core::Dataset pred_raw =
      io::load_dataset(options.pred_manifest, /*allow_other=*/true, options.threads);
  if (pred_raw.manifest.num_classes != gt.manifest.num_classes) {
    throw DataError("prediction manifest declares " +
                    std::to_string(pred_raw.manifest.num_classes) + " classes, ground truth has " +
                    std::to_string(gt.manifest.num_classes));
  }

  std::vector<eval::PredictedImage> pred;
  pred.reserve(pred_raw.images.size());
  for (core::AnnotatedImage& img : pred_raw.images) {
    eval::PredictedImage p;
    p.image_id = std::move(img.image_id);
    p.map = std::move(img.map);
    p.classes = std::move(img.classes);
    const std::vector<core::Violation> violations =
        eval::validate_predicted(p, pred_raw.manifest.num_classes);
    if (!violations.empty()) {
      throw DataError("invalid prediction '" + p.image_id + "': " + violations.front().message);
    }
    pred.push_back(std::move(p));
  }

  eval::EvalConfig config;
  config.overseg_criterion = options.overseg_criterion;
  config.threads = options.threads;
  std::vector<eval::ImageBreakdown> breakdowns;
  const eval::MetricsReport report = eval::evaluate_dataset(gt, pred, config, &breakdowns);

  StagingDir staging(options.output_dir);
  io::write_text_file(staging.path() / "report.txt", io::render_report_text(report));
  io::write_text_file(staging.path() / "report.csv", io::render_report_csv(report));
  io::write_text_file(staging.path() / "per_image.csv",
                      io::render_image_breakdown_csv(breakdowns));
  staging.commit();

  ordered_json summary;
  summary["command"] = "eval";
  summary["status"] = "ok";
  summary["images"] = gt.images.size();
  summary["matches"] = report.detection.matches;
  summary["false_positives"] = report.segmentation.fp_count;
  summary["false_negatives"] = report.segmentation.fn_count;
  summary["overseg_criterion"] =
      options.overseg_criterion == eval::OverlapCriterion::kCoverage ? "coverage" : "iou";
  summary["report_dir"] = options.output_dir;
  out << summary.dump() << "\n";
}

namespace {

std::string summary_lines(const std::map<int, stop::StopResult>& results,
                          const MonitorOptions& options) {
  std::string text;
  for (const auto& [stage, result] : results) {
    const stop::StopPolicy& policy = stage == 1 ? options.stage1 : options.stage2;
    text += io::summary_record(stage, result, policy);
    text += "\n";
  }
  return text;
}

void run_monitor_batch(const MonitorOptions& options, std::ostream& out) {
  const std::map<int, stop::LossTrace> traces = io::read_loss_traces(options.trace_path);
  if (traces.empty()) throw DataError("trace file has no records: " + options.trace_path);

  std::map<int, stop::StopResult> results;
  if (traces.contains(1) && traces.contains(2)) {
    stop::TwoStageSchedule schedule;
    schedule.stage1 = options.stage1;
    schedule.stage2 = options.stage2;
    const stop::TwoStageResult r = stop::two_stage_run(traces.at(1), traces.at(2), schedule);
    results[1] = r.stage1;
    results[2] = r.stage2;
  } else {
    const auto& [stage, trace] = *traces.begin();
    results[stage] = stop::run_early_stop(trace, stage == 2 ? options.stage2 : options.stage1);
  }

  // Side outputs are rendered first and written whole, so a failed run
  // leaves no partial files behind.
  std::string smoothed_text;
  if (!options.smoothed_path.empty()) {
    for (const auto& [stage, trace] : traces) {
      const stop::LossTrace s =
          stop::savgol_smooth(trace, options.smooth_window, options.smooth_order);
      for (std::size_t e = 0; e < s.losses.size(); ++e) {
        smoothed_text += std::to_string(stage) + "," + std::to_string(e) + "," +
                         nlohmann::json(s.losses[e]).dump() + "\n";
      }
    }
  }

  const std::string summaries = summary_lines(results, options);
  out << summaries;
  if (!options.summary_path.empty()) io::write_text_file(options.summary_path, summaries);
  if (!options.smoothed_path.empty()) io::write_text_file(options.smoothed_path, smoothed_text);
}

// Tails the trace file, feeding complete appended records to the per-stage
// sessions and emitting one decision line per epoch. Ends when an "end"
// line appears or the configured final stage stops. The summary copy is
// written live: it is the trainer-integration protocol.
void run_monitor_follow(const MonitorOptions& options, std::ostream& out, std::ostream* copy) {
  struct StageSession {
    stop::SessionState state;
    stop::StopResult result;
    bool stopped = false;
  };
  std::map<int, StageSession> sessions;
  std::ifstream in;
  std::streampos offset = 0;
  std::string pending;
  bool saw_end = false;
  bool saw_any = false;

  auto process_line = [&](const std::string& line) {
    io::TraceRecord record;
    bool is_end = false;
    if (!io::parse_trace_line(line, record, is_end)) {
      if (is_end) saw_end = true;
      return;
    }
    saw_any = true;
    StageSession& session = sessions[record.stage];
    if (session.stopped) return;  // late records after a stop are ignored
    if (record.stage == 2 && session.state.epoch == 0 && sessions.contains(1)) {
      // Stage 2 inherits stage 1's incumbent as its reference loss.
      session.state.l_min = sessions.at(1).state.l_min;
    }
    const stop::StopPolicy& policy = record.stage == 2 ? options.stage2 : options.stage1;
    const stop::Decision d = stop::observe(session.state, policy, record.loss);
    session.result.best_epoch = d.best_epoch;
    session.result.stop_epoch = session.state.epoch - 1;
    session.result.state = session.state;
    if (d.stop) session.stopped = true;

    ordered_json j;
    j["stage"] = record.stage;
    j["epoch"] = session.state.epoch - 1;
    j["decision"] = d.stop ? "stop" : "continue";
    j["best_epoch"] = d.best_epoch;
    out << j.dump() << "\n";
    out.flush();
    if (copy != nullptr) {
      *copy << j.dump() << "\n";
      copy->flush();
    }
  };

  while (true) {
    std::ifstream reader(options.trace_path);
    if (reader) {
      reader.seekg(offset);
      std::string chunk((std::istreambuf_iterator<char>(reader)),
                        std::istreambuf_iterator<char>());
      offset += static_cast<std::streamoff>(chunk.size());
      pending += chunk;
      std::size_t newline;
      while ((newline = pending.find('\n')) != std::string::npos) {
        process_line(pending.substr(0, newline));
        pending.erase(0, newline + 1);
      }
    }
    const auto final_it = sessions.find(options.follow_stages);
    if (saw_end || (final_it != sessions.end() && final_it->second.stopped)) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(options.poll_ms));
  }
  if (!saw_any) throw DataError("trace file has no records: " + options.trace_path);

  std::map<int, stop::StopResult> results;
  for (const auto& [stage, session] : sessions) results[stage] = session.result;
  const std::string summaries = summary_lines(results, options);
  out << summaries;
  if (copy != nullptr) *copy << summaries;
}

}  // namespace

void run_monitor(const MonitorOptions& options, std::ostream& out) {
  stop::validate_policy(options.stage1);
  stop::validate_policy(options.stage2);

  if (options.follow) {
    std::ofstream copy_stream;
    std::ostream* copy = nullptr;
    if (!options.summary_path.empty()) {
      copy_stream.open(options.summary_path, std::ios::trunc);
      if (!copy_stream) throw IoError("cannot open for writing: " + options.summary_path);
      copy = &copy_stream;
    }
    run_monitor_follow(options, out, copy);
  } else {
    run_monitor_batch(options, out);
  }

  ordered_json summary;
  summary["command"] = "monitor";
  summary["status"] = "ok";
  out << summary.dump() << "\n";
}

}  // namespace snowbench::cli
