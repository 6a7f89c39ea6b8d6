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

#include "snowbench/io/trace.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "snowbench/core/error.hpp"

namespace snowbench::io {

namespace {

std::string trimmed(const std::string& s) {
  const std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

bool parse_trace_line(const std::string& line, TraceRecord& record, bool& is_end) {
  is_end = false;
  const std::string body = trimmed(line);
  if (body.empty() || body.front() == '#') return false;
  if (body == "end") {
    is_end = true;
    return false;
  }
  const std::size_t c1 = body.find(',');
  const std::size_t c2 = body.find(',', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw ParseError("malformed trace record: '" + body + "'");
  }
  const std::string stage_s = trimmed(body.substr(0, c1));
  const std::string epoch_s = trimmed(body.substr(c1 + 1, c2 - c1 - 1));
  const std::string loss_s = trimmed(body.substr(c2 + 1));
  try {
    record.stage = std::stoi(stage_s);
    record.epoch = std::stoi(epoch_s);
    std::size_t used = 0;
    record.loss = std::stod(loss_s, &used);
    if (used != loss_s.size()) throw std::invalid_argument(loss_s);
  } catch (const std::exception&) {
    throw ParseError("malformed trace record: '" + body + "'");
  }
  return true;
}

std::map<int, stop::LossTrace> read_loss_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path.string());
  std::map<int, stop::LossTrace> traces;
  std::string line;
  while (std::getline(in, line)) {
    TraceRecord record;
    bool is_end = false;
    if (!parse_trace_line(line, record, is_end)) {
      if (is_end) break;
      continue;
    }
    stop::LossTrace& trace = traces[record.stage];
    trace.stage = record.stage;
    if (record.epoch != static_cast<int>(trace.losses.size())) {
      throw ParseError("stage " + std::to_string(record.stage) + " epochs must be contiguous from 0; got epoch " +
                       std::to_string(record.epoch) + " after " +
                       std::to_string(trace.losses.size()) + " records");
    }
    trace.losses.push_back(record.loss);
  }
  return traces;
}

void write_loss_trace(const std::filesystem::path& path, const stop::LossTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (std::size_t e = 0; e < trace.losses.size(); ++e) {
    out << trace.stage << "," << e << ","
        << nlohmann::json(trace.losses[e]).dump() << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::string summary_record(int stage, const stop::StopResult& result,
                           const stop::StopPolicy& policy) {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["best_epoch"] = result.best_epoch;
  j["stop_epoch"] = result.stop_epoch;
  j["mode"] = mode_name(policy.mode);
  j["patience"] = policy.patience;
  j["min_delta"] = policy.min_delta;
  j["max_epochs"] = policy.max_epochs;
  return j.dump();
}

std::string mode_name(stop::StopMode mode) {
  return mode == stop::StopMode::kPaperVerbatim ? "paper-verbatim" : "conventional";
}

stop::StopMode mode_from_name(const std::string& name) {
  if (name == "paper-verbatim") return stop::StopMode::kPaperVerbatim;
  if (name == "conventional") return stop::StopMode::kConventional;
  throw ConfigError("unknown stopping mode '" + name + "' (expected paper-verbatim or conventional)");
}

}  // namespace snowbench::io
