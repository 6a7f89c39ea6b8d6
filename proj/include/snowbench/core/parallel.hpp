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

#ifndef SNOWBENCH_CORE_PARALLEL_HPP_
#define SNOWBENCH_CORE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace snowbench::core {

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Work is statically partitioned, so callers that write
// only to slot i get results independent of the thread count. The first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace snowbench::core

#endif  // SNOWBENCH_CORE_PARALLEL_HPP_
