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

#ifndef SNOWBENCH_CORE_RNG_HPP_
#define SNOWBENCH_CORE_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace snowbench::core {

// Deterministic 64-bit generator (splitmix64). The standard <random>
// distributions are implementation-defined, so every random draw in the
// toolkit goes through this class to keep outputs bit-identical across
// platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, n) by rejection sampling; n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Sub-seed for (master seed, stage tag, item): FNV-1a over the inputs,
// finalized through the splitmix64 mixer. Stages and per-class streams
// are independent; adding one stage never perturbs another's draws.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage_tag, std::uint64_t item);

// Fisher-Yates shuffle driven by SplitMix64.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

// round-half-up of rho * n, with rho read as a 9-decimal fixed-point
// fraction. Plain floating multiplication can land a hair below an exact
// .5 (0.3 * 8135 = 2440.4999...), which would silently misround.
std::uint64_t scaled_count(double rho, std::uint64_t n);

}  // namespace snowbench::core

#endif  // SNOWBENCH_CORE_RNG_HPP_
