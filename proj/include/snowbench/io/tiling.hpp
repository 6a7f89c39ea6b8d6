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

#ifndef SNOWBENCH_IO_TILING_HPP_
#define SNOWBENCH_IO_TILING_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "snowbench/core/types.hpp"

namespace snowbench::io {

struct Tile {
  std::int32_t origin_x = 0;
  std::int32_t origin_y = 0;
  core::AnnotatedImage image;
  // Child id -> parent id; total over the child ids of this tile.
  std::map<core::InstanceId, core::InstanceId> remap;
};

struct TileSet {
  std::string parent_id;
  std::uint32_t tile_size = 0;
  std::uint32_t overlap = 0;
  std::vector<Tile> tiles;
};

// Cuts the image into size x size tiles on a stride of (size - overlap).
// The last origin per axis is clamped to dim - size (duplicated coverage
// instead of padding); when the image is smaller than the tile size a
// single truncated tile at origin 0 is produced. Instances are clipped,
// never dropped; child ids are re-densified from 1 in ascending parent-id
// order; empty tiles are retained.
TileSet tile_image(const core::AnnotatedImage& img, std::uint32_t size = 256,
                   std::uint32_t overlap = 0);

// Reassembles the parent image through the remap tables. Overlapping
// tiles must agree pixel-wise after remapping; disagreement raises
// DataError.
core::AnnotatedImage stitch_tiles(const TileSet& tiles);

// Weighted-sampler plan: each tile is weighted by the largest inverse
// class frequency among the classes it contains, so rare-class tiles
// dominate sampling. Instance-free tiles get the minimum positive weight.
// Weights are normalized to mean 1.
std::vector<double> sampling_weights(const std::vector<core::AnnotatedImage>& tiles,
                                     const std::map<core::ClassId, std::uint64_t>& class_counts);

}  // namespace snowbench::io

#endif  // SNOWBENCH_IO_TILING_HPP_
