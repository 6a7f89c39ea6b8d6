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

#ifndef SNOWBENCH_IO_CONTAINER_HPP_
#define SNOWBENCH_IO_CONTAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snowbench/core/types.hpp"

namespace snowbench::io {

// Binary mask container, bit-exact across platforms:
//
//   magic   "SNWB"                        4 bytes
//   version u16 LE (currently 1)          2 bytes
//   width   u32 LE                        4 bytes
//   height  u32 LE                        4 bytes
//   instance plane, row-major u32 LE      4*w*h bytes
//   class plane,    row-major u16 LE      2*w*h bytes
//   crc32 of all preceding bytes, u32 LE  4 bytes
//
// The class plane is derivable from the instance plane plus the class
// assignment (pixel class = class of its instance, 0 on background); it
// is stored redundantly for interoperability and checked on load.

inline constexpr std::uint16_t kContainerVersion = 1;

// CRC-32 (IEEE 802.3 reflected polynomial, as in zlib).
std::uint32_t crc32(const std::uint8_t* data, std::size_t len);

std::vector<std::uint8_t> encode_container(const core::AnnotatedImage& image);

// Decodes and validates magic, version, size, CRC, and plane consistency.
// Predicted-class sentinels (kOtherClass) in the class plane are accepted
// only when allow_other is set.
core::AnnotatedImage decode_container(const std::vector<std::uint8_t>& bytes,
                                      const std::string& image_id, bool allow_other = false);

void write_container(const std::filesystem::path& path, const core::AnnotatedImage& image);
core::AnnotatedImage read_container(const std::filesystem::path& path,
                                    const std::string& image_id, bool allow_other = false);

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_CONTAINER_HPP_
