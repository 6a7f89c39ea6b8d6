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

#ifndef SNOWBENCH_CLI_COMMANDS_HPP_
#define SNOWBENCH_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <string>

#include "snowbench/core/types.hpp"
#include "snowbench/evaluation/metrics.hpp"
#include "snowbench/stopping/early_stop.hpp"

namespace snowbench::cli {

// Every command writes its outputs into a staging directory first and
// renames it into place on success, so a failing run leaves no partial
// outputs. Each run finishes with one machine-readable JSON summary line
// on standard output. Commands throw; the entry point maps ConfigError
// to exit 1 and data errors to exit 2.

struct CorruptOptions {
  std::string input_manifest;
  std::string output_dir;
  core::NoiseSpec spec;
  int threads = 0;
};

void run_corrupt(const CorruptOptions& options, std::ostream& out);

struct TileOptions {
  std::string input_manifest;
  std::string output_dir;
  std::uint32_t size = 256;
  std::uint32_t overlap = 0;
  int threads = 0;
};

void run_tile(const TileOptions& options, std::ostream& out);

struct EvalOptions {
  std::string gt_manifest;
  std::string pred_manifest;
  std::string output_dir;
  eval::OverlapCriterion overseg_criterion = eval::OverlapCriterion::kCoverage;
  int threads = 0;
};

void run_eval(const EvalOptions& options, std::ostream& out);

struct MonitorOptions {
  std::string trace_path;
  stop::StopPolicy stage1;
  stop::StopPolicy stage2;
  bool follow = false;
  int poll_ms = 200;
  int follow_stages = 1;  // follow mode exits after this stage stops
  std::string summary_path;   // optional copy of the summary lines
  std::string smoothed_path;  // optional Savitzky-Golay smoothed traces
  int smooth_window = 11;
  int smooth_order = 4;
};

void run_monitor(const MonitorOptions& options, std::ostream& out);

}  // namespace snowbench::cli

#endif  // SNOWBENCH_CLI_COMMANDS_HPP_
