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

#include "snowbench/io/corruption_log.hpp"

#include <fstream>

#include <json.hpp>

#include "snowbench/core/error.hpp"

namespace snowbench::io {

namespace {

using nlohmann::ordered_json;

ordered_json spec_json(const core::NoiseSpec& spec) {
  ordered_json j;
  j["record"] = "spec";
  j["detection_rho"] = spec.detection_rho;
  j["classification_rho"] = spec.classification_rho;
  if (spec.segmentation.has_value()) {
    const core::SegmentationNoise& seg = *spec.segmentation;
    j["segmentation"] = {{"epsilon_px", seg.epsilon_px},
                         {"ellipse_scale", seg.ellipse_scale},
                         {"ellipse_samples", seg.ellipse_samples},
                         {"merge_enabled", seg.merge_enabled},
                         {"smooth_radius_px", seg.smooth_radius_px}};
  } else {
    j["segmentation"] = nullptr;
  }
  j["seed"] = spec.seed;
  return j;
}

core::NoiseSpec spec_from_json(const ordered_json& j) {
  core::NoiseSpec spec;
  spec.detection_rho = j.at("detection_rho").get<double>();
  spec.classification_rho = j.at("classification_rho").get<double>();
  if (!j.at("segmentation").is_null()) {
    const ordered_json& js = j.at("segmentation");
    core::SegmentationNoise seg;
    seg.epsilon_px = js.at("epsilon_px").get<double>();
    seg.ellipse_scale = js.at("ellipse_scale").get<double>();
    seg.ellipse_samples = js.at("ellipse_samples").get<int>();
    seg.merge_enabled = js.at("merge_enabled").get<bool>();
    seg.smooth_radius_px = js.at("smooth_radius_px").get<double>();
    spec.segmentation = seg;
  }
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace

void write_corruption_log(const std::filesystem::path& path, const corrupt::CorruptionLog& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << spec_json(log.spec).dump() << "\n";
  for (const corrupt::RemovalRecord& r : log.removals) {
    ordered_json j;
    j["record"] = "remove";
    j["image"] = r.image_id;
    j["instance"] = r.id;
    j["class"] = r.cls;
    out << j.dump() << "\n";
  }
  for (const corrupt::DistortRecord& r : log.distortions) {
    ordered_json j;
    j["record"] = "distort";
    j["image"] = r.image_id;
    j["instance"] = r.id;
    j["old_pixels"] = r.old_pixels;
    j["new_pixels"] = r.new_pixels;
    j["vertices"] = r.vertices;
    j["fallback"] = static_cast<int>(r.fallback);
    out << j.dump() << "\n";
  }
  for (const corrupt::MergeRecord& r : log.merges) {
    ordered_json j;
    j["record"] = "merge";
    j["image"] = r.image_id;
    j["kept"] = r.kept;
    j["absorbed"] = r.absorbed;
    j["class"] = r.cls;
    j["border"] = r.border;
    out << j.dump() << "\n";
  }
  for (const corrupt::RelabelRecord& r : log.relabels) {
    ordered_json j;
    j["record"] = "relabel";
    j["image"] = r.image_id;
    j["instance"] = r.id;
    j["old_class"] = r.old_cls;
    j["new_class"] = r.new_cls;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

corrupt::CorruptionLog read_corruption_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log: " + path.string());
  corrupt::CorruptionLog log;
  std::string line;
  bool have_spec = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
      const std::string record = j.at("record").get<std::string>();
      if (record == "spec") {
        log.spec = spec_from_json(j);
        have_spec = true;
      } else if (record == "remove") {
        log.removals.push_back({j.at("image").get<std::string>(),
                                j.at("instance").get<core::InstanceId>(),
                                j.at("class").get<core::ClassId>()});
      } else if (record == "distort") {
        log.distortions.push_back({j.at("image").get<std::string>(),
                                   j.at("instance").get<core::InstanceId>(),
                                   j.at("old_pixels").get<std::uint64_t>(),
                                   j.at("new_pixels").get<std::uint64_t>(),
                                   j.at("vertices").get<std::uint32_t>(),
                                   static_cast<corrupt::DistortFallback>(j.at("fallback").get<int>())});
      } else if (record == "merge") {
        log.merges.push_back({j.at("image").get<std::string>(),
                              j.at("kept").get<core::InstanceId>(),
                              j.at("absorbed").get<core::InstanceId>(),
                              j.at("class").get<core::ClassId>(),
                              j.at("border").get<std::uint64_t>()});
      } else if (record == "relabel") {
        log.relabels.push_back({j.at("image").get<std::string>(),
                                j.at("instance").get<core::InstanceId>(),
                                j.at("old_class").get<core::ClassId>(),
                                j.at("new_class").get<core::ClassId>()});
      } else {
        throw ParseError("unknown record type '" + record + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("malformed log line " + std::to_string(line_no) + " in " + path.string() +
                       ": " + e.what());
    }
  }
  if (!have_spec) throw ParseError("log has no spec record: " + path.string());
  return log;
}

}  // namespace snowbench::io
