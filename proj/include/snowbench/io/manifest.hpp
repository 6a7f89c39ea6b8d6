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

#ifndef SNOWBENCH_IO_MANIFEST_HPP_
#define SNOWBENCH_IO_MANIFEST_HPP_

#include <filesystem>
#include <string>

#include "snowbench/core/types.hpp"

namespace snowbench::io {

// Manifests are schema-versioned JSON; container paths are relative to
// the manifest file. Writes are atomic (temp file + rename).
core::DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const core::DatasetManifest& manifest);

// Loads every container referenced by the manifest, in manifest order.
// Missing files or invalid images raise DataError. allow_other permits
// prediction-only class sentinels in the containers.
core::Dataset load_dataset(const std::filesystem::path& manifest_path, bool allow_other = false,
                           int threads = 1);

// Writes all containers into dir/containers/ plus dir/manifest.json and
// returns the manifest path.
std::filesystem::path save_dataset(const std::filesystem::path& dir, const core::Dataset& dataset);

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_MANIFEST_HPP_
