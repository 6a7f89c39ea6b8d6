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

#ifndef SNOWBENCH_IO_TRACE_HPP_
#define SNOWBENCH_IO_TRACE_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "snowbench/stopping/early_stop.hpp"

namespace snowbench::io {

// Loss traces are line-delimited records "stage,epoch,loss". Blank lines
// and '#' comments are skipped; a literal "end" line marks a complete
// trace for follow-mode readers. This file protocol is the integration
// boundary with any external trainer.

struct TraceRecord {
  int stage = 1;
  int epoch = 0;
  double loss = 0.0;
};

// Parses one record line. Returns false for blank/comment lines; throws
// ParseError on malformed input; "end" sets the flag instead.
bool parse_trace_line(const std::string& line, TraceRecord& record, bool& is_end);

// Reads a whole trace file into per-stage traces. Epochs must be
// contiguous from 0 within each stage.
std::map<int, stop::LossTrace> read_loss_traces(const std::filesystem::path& path);

void write_loss_trace(const std::filesystem::path& path, const stop::LossTrace& trace);

// One summary line per stage: stage, best/stop epochs, mode, and the
// policy parameters, as a JSON object.
std::string summary_record(int stage, const stop::StopResult& result,
                           const stop::StopPolicy& policy);

std::string mode_name(stop::StopMode mode);
stop::StopMode mode_from_name(const std::string& name);  // throws ConfigError

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_TRACE_HPP_
