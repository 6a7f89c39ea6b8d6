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

#ifndef SNOWBENCH_IO_REPORT_HPP_
#define SNOWBENCH_IO_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "snowbench/evaluation/metrics.hpp"

namespace snowbench::io {

// Deterministic renderings: identical reports produce identical bytes.
// Percentages and Hausdorff distances carry one decimal; undefined
// metrics render as "-"; the meaningless background x U cell renders "?".
std::string render_report_text(const eval::MetricsReport& report);

// Flat layout, one row per metric: task,class,metric,value.
std::string render_report_csv(const eval::MetricsReport& report);

// Per-image rows: image_id,task,class,metric,value. Detection precision
// appears under both attributions (predicted class and true class).
std::string render_image_breakdown_csv(const std::vector<eval::ImageBreakdown>& breakdowns);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_REPORT_HPP_
