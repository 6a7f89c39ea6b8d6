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

#ifndef SNOWBENCH_IO_CORRUPTION_LOG_HPP_
#define SNOWBENCH_IO_CORRUPTION_LOG_HPP_

#include <filesystem>

#include "snowbench/corruption/noise.hpp"

namespace snowbench::io {

// Line-delimited JSON: a leading spec record, then one record per event
// in stage order (removals, distortions, merges, relabels).
void write_corruption_log(const std::filesystem::path& path, const corrupt::CorruptionLog& log);
corrupt::CorruptionLog read_corruption_log(const std::filesystem::path& path);

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_CORRUPTION_LOG_HPP_
