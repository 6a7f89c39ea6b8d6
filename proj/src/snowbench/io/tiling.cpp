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

#include "snowbench/io/tiling.hpp"

#include <algorithm>
#include <set>

#include "snowbench/core/error.hpp"

namespace snowbench::io {

namespace {

std::vector<std::int32_t> axis_origins(std::uint32_t dim, std::uint32_t size,
                                       std::uint32_t stride) {
  if (dim < size) return {0};  // single truncated tile
  std::vector<std::int32_t> origins;
  const std::int32_t last = static_cast<std::int32_t>(dim - size);
  for (std::int32_t o = 0; o <= last; o += static_cast<std::int32_t>(stride)) {
    origins.push_back(o);
  }
  if (origins.back() != last) origins.push_back(last);  // clamp, duplicated coverage
  return origins;
}

}  // namespace

TileSet tile_image(const core::AnnotatedImage& img, std::uint32_t size, std::uint32_t overlap) {
  if (size < 1) throw ConfigError("tile size must be >= 1");
  if (overlap >= size) {
    throw ConfigError("tile overlap must be smaller than the tile size (got overlap " +
                      std::to_string(overlap) + ", size " + std::to_string(size) + ")");
  }
  const std::uint32_t stride = size - overlap;

  TileSet out;
  out.parent_id = img.image_id;
  out.tile_size = size;
  out.overlap = overlap;

  const std::vector<std::int32_t> xs = axis_origins(img.map.width, size, stride);
  const std::vector<std::int32_t> ys = axis_origins(img.map.height, size, stride);

  for (const std::int32_t oy : ys) {
    for (const std::int32_t ox : xs) {
      Tile tile;
      tile.origin_x = ox;
      tile.origin_y = oy;
      const std::uint32_t tw = std::min<std::uint32_t>(size, img.map.width - ox);
      const std::uint32_t th = std::min<std::uint32_t>(size, img.map.height - oy);

      core::AnnotatedImage child;
      child.image_id = img.image_id + "_x" + std::to_string(ox) + "_y" + std::to_string(oy);
      child.map = core::make_instance_map(tw, th);
      child.metadata = img.metadata;

      std::set<core::InstanceId> present;
      for (std::uint32_t y = 0; y < th; ++y) {
        for (std::uint32_t x = 0; x < tw; ++x) {
          const core::InstanceId parent = img.map.at(ox + static_cast<std::int32_t>(x),
                                                     oy + static_cast<std::int32_t>(y));
          if (parent != 0) present.insert(parent);
        }
      }
      std::map<core::InstanceId, core::InstanceId> parent_to_child;
      core::InstanceId next = 1;
      for (const core::InstanceId parent : present) {
        parent_to_child[parent] = next;
        tile.remap[next] = parent;
        child.classes[next] = img.classes.at(parent);
        ++next;
      }
      for (std::uint32_t y = 0; y < th; ++y) {
        for (std::uint32_t x = 0; x < tw; ++x) {
          const core::InstanceId parent = img.map.at(ox + static_cast<std::int32_t>(x),
                                                     oy + static_cast<std::int32_t>(y));
          if (parent != 0) {
            child.map.at(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)) =
                parent_to_child.at(parent);
          }
        }
      }
      tile.image = std::move(child);
      out.tiles.push_back(std::move(tile));
    }
  }
  return out;
}

core::AnnotatedImage stitch_tiles(const TileSet& tiles) {
  if (tiles.tiles.empty()) throw DataError("cannot stitch an empty tile set");
  std::uint32_t width = 0, height = 0;
  for (const Tile& t : tiles.tiles) {
    width = std::max(width, static_cast<std::uint32_t>(t.origin_x) + t.image.map.width);
    height = std::max(height, static_cast<std::uint32_t>(t.origin_y) + t.image.map.height);
  }

  core::AnnotatedImage parent;
  parent.image_id = tiles.parent_id;
  parent.map = core::make_instance_map(width, height);
  parent.metadata = tiles.tiles.front().image.metadata;

  std::vector<char> written(static_cast<std::size_t>(width) * height, 0);
  for (const Tile& t : tiles.tiles) {
    for (std::uint32_t y = 0; y < t.image.map.height; ++y) {
      for (std::uint32_t x = 0; x < t.image.map.width; ++x) {
        const core::InstanceId child = t.image.map.at(static_cast<std::int32_t>(x),
                                                      static_cast<std::int32_t>(y));
        const core::InstanceId value = child == 0 ? 0 : t.remap.at(child);
        const std::int32_t px = t.origin_x + static_cast<std::int32_t>(x);
        const std::int32_t py = t.origin_y + static_cast<std::int32_t>(y);
        const std::size_t idx = static_cast<std::size_t>(py) * width + static_cast<std::size_t>(px);
        if (written[idx] && parent.map.pixels[idx] != value) {
          throw DataError("overlapping tiles disagree at (" + std::to_string(px) + "," +
                          std::to_string(py) + ") in " + tiles.parent_id);
        }
        parent.map.pixels[idx] = value;
        written[idx] = 1;
      }
    }
    for (const auto& [child, cls] : t.image.classes) {
      const core::InstanceId parent_id = t.remap.at(child);
      const auto [it, inserted] = parent.classes.emplace(parent_id, cls);
      if (!inserted && it->second != cls) {
        throw DataError("tiles disagree on the class of instance " + std::to_string(parent_id));
      }
    }
  }
  return parent;
}

std::vector<double> sampling_weights(const std::vector<core::AnnotatedImage>& tiles,
                                     const std::map<core::ClassId, std::uint64_t>& class_counts) {
  std::uint64_t total = 0;
  for (const auto& [cls, count] : class_counts) {
    (void)cls;
    total += count;
  }

  std::vector<double> raw(tiles.size(), 0.0);
  double min_positive = 0.0;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    std::set<core::ClassId> present;
    for (const auto& [id, cls] : tiles[i].classes) {
      (void)id;
      present.insert(cls);
    }
    double w = 0.0;
    for (const core::ClassId cls : present) {
      const auto it = class_counts.find(cls);
      if (it == class_counts.end() || it->second == 0) {
        throw DataError("tile contains class " + std::to_string(cls) +
                        " with no dataset-level count");
      }
      w = std::max(w, static_cast<double>(total) / static_cast<double>(it->second));
    }
    raw[i] = w;
    if (w > 0.0 && (min_positive == 0.0 || w < min_positive)) min_positive = w;
  }
  if (min_positive == 0.0) min_positive = 1.0;  // all tiles empty
  for (double& w : raw) {
    if (w == 0.0) w = min_positive;
  }

  double mean = 0.0;
  for (const double w : raw) mean += w;
  mean /= raw.empty() ? 1.0 : static_cast<double>(raw.size());
  for (double& w : raw) w /= mean;
  return raw;
}

}  // namespace snowbench::io
