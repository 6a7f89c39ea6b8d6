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

#include "staging.hpp"

#include <unistd.h>

#include "snowbench/core/error.hpp"

namespace snowbench::cli {

namespace fs = std::filesystem;

StagingDir::StagingDir(const fs::path& target) : target_(target) {
  if (target_.empty()) throw ConfigError("output directory must be given");
  if (fs::exists(target_)) {
    if (!fs::is_directory(target_) || !fs::is_empty(target_)) {
      throw ConfigError("output directory exists and is not empty: " + target_.string());
    }
  }
  fs::path parent = target_.parent_path();
  if (parent.empty()) parent = ".";
  fs::create_directories(parent);
  staging_ = parent / ("." + target_.filename().string() + ".staging-" + std::to_string(getpid()));
  if (fs::exists(staging_)) fs::remove_all(staging_);
  fs::create_directories(staging_);
}

StagingDir::~StagingDir() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void StagingDir::commit() {
  if (fs::exists(target_)) fs::remove(target_);  // empty directory, checked at construction
  fs::rename(staging_, target_);
  committed_ = true;
}

}  // namespace snowbench::cli
