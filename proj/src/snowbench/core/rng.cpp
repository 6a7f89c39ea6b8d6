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

#include "snowbench/core/rng.hpp"

#include <cmath>

#include "snowbench/core/error.hpp"

namespace snowbench::core {

std::uint64_t SplitMix64::next_below(std::uint64_t n) {
  if (n == 0) throw LogicError("next_below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
  // Hash the value little-endian regardless of host byte order.
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage_tag, std::uint64_t item) {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_u64(h, master);
  h = fnv1a(h, stage_tag.data(), stage_tag.size());
  h = fnv1a_u64(h, item);
  return mix(h);
}

std::uint64_t scaled_count(double rho, std::uint64_t n) {
  constexpr std::uint64_t kDenominator = 1'000'000'000ull;
  if (!(rho >= 0.0) || !(rho < 1.0) || !std::isfinite(rho)) {
    throw ConfigError("fraction must be in [0,1)");
  }
  const auto numerator = static_cast<std::uint64_t>(std::llround(rho * static_cast<double>(kDenominator)));
  const unsigned __int128 product =
      static_cast<unsigned __int128>(numerator) * n + kDenominator / 2;
  return static_cast<std::uint64_t>(product / kDenominator);
}

}  // namespace snowbench::core
