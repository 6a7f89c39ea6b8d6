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

#include "snowbench/io/container.hpp"

#include <array>
#include <fstream>

#include "snowbench/core/error.hpp"

namespace snowbench::io {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'N', 'W', 'B'};

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) {
      c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    }
    table[i] = c;
  }
  return table;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
  static const std::array<std::uint32_t, 256> table = make_crc_table();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i) {
    c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> encode_container(const core::AnnotatedImage& image) {
  const core::InstanceMap& map = image.map;
  const std::size_t pixel_count = static_cast<std::size_t>(map.width) * map.height;
  if (map.pixels.size() != pixel_count) {
    throw DataError("instance plane size does not match dimensions");
  }

  std::vector<std::uint8_t> out;
  out.reserve(14 + 6 * pixel_count + 4);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u16(out, kContainerVersion);
  put_u32(out, map.width);
  put_u32(out, map.height);
  for (core::InstanceId id : map.pixels) put_u32(out, id);
  for (core::InstanceId id : map.pixels) {
    core::ClassId cls = 0;
    if (id != 0) {
      const auto it = image.classes.find(id);
      if (it == image.classes.end()) {
        throw DataError("instance " + std::to_string(id) + " has no class in " + image.image_id);
      }
      cls = it->second;
    }
    put_u16(out, cls);
  }
  put_u32(out, crc32(out.data(), out.size()));
  return out;
}

core::AnnotatedImage decode_container(const std::vector<std::uint8_t>& bytes,
                                      const std::string& image_id, bool allow_other) {
  if (bytes.size() < 18) throw CorruptFileError("container too short: " + image_id);
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw CorruptFileError("bad magic bytes: " + image_id);
  }
  const std::uint16_t version = get_u16(bytes.data() + 4);
  if (version != kContainerVersion) {
    throw UnsupportedVersionError("container version " + std::to_string(version) +
                                  " not supported: " + image_id);
  }
  const std::uint32_t width = get_u32(bytes.data() + 6);
  const std::uint32_t height = get_u32(bytes.data() + 10);
  const std::size_t pixel_count = static_cast<std::size_t>(width) * height;
  const std::size_t expected = 14 + 6 * pixel_count + 4;
  if (bytes.size() != expected) {
    throw CorruptFileError("container size mismatch: " + image_id);
  }
  const std::uint32_t stored_crc = get_u32(bytes.data() + expected - 4);
  if (crc32(bytes.data(), expected - 4) != stored_crc) {
    throw CorruptFileError("CRC mismatch: " + image_id);
  }

  core::AnnotatedImage image;
  image.image_id = image_id;
  image.map.width = width;
  image.map.height = height;
  image.map.pixels.resize(pixel_count);
  const std::uint8_t* inst = bytes.data() + 14;
  const std::uint8_t* cls = inst + 4 * pixel_count;
  for (std::size_t i = 0; i < pixel_count; ++i) {
    const core::InstanceId id = get_u32(inst + 4 * i);
    const core::ClassId c = get_u16(cls + 2 * i);
    image.map.pixels[i] = id;
    if (id == 0) {
      if (c != 0) {
        throw InconsistentPlanesError("background pixel carries class " + std::to_string(c) +
                                      ": " + image_id);
      }
      continue;
    }
    if (c == 0) {
      throw InconsistentPlanesError("foreground pixel of instance " + std::to_string(id) +
                                    " carries background class: " + image_id);
    }
    if (c == core::kOtherClass && !allow_other) {
      throw InconsistentPlanesError("ground-truth container carries 'other' class: " + image_id);
    }
    const auto [it, inserted] = image.classes.emplace(id, c);
    if (!inserted && it->second != c) {
      throw InconsistentPlanesError("instance " + std::to_string(id) +
                                    " has conflicting classes in the class plane: " + image_id);
    }
  }
  return image;
}

void write_container(const std::filesystem::path& path, const core::AnnotatedImage& image) {
  const std::vector<std::uint8_t> bytes = encode_container(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

core::AnnotatedImage read_container(const std::filesystem::path& path,
                                    const std::string& image_id, bool allow_other) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_container(bytes, image_id, allow_other);
}

}  // namespace snowbench::io
