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

#include "snowbench/core/types.hpp"

#include <set>

#include "snowbench/core/error.hpp"

namespace snowbench::core {

InstanceMap make_instance_map(std::uint32_t width, std::uint32_t height) {
  InstanceMap map;
  map.width = width;
  map.height = height;
  map.pixels.assign(static_cast<std::size_t>(width) * height, 0);
  return map;
}

void validate_noise_spec(const NoiseSpec& spec) {
  if (!(spec.detection_rho >= 0.0 && spec.detection_rho < 1.0)) {
    throw ConfigError("detection rho must be in [0,1), got " +
                      std::to_string(spec.detection_rho));
  }
  if (!(spec.classification_rho >= 0.0 && spec.classification_rho < 1.0)) {
    throw ConfigError("classification rho must be in [0,1), got " +
                      std::to_string(spec.classification_rho));
  }
  if (spec.segmentation.has_value()) {
    const SegmentationNoise& seg = *spec.segmentation;
    if (!(seg.epsilon_px >= 0.0)) {
      throw ConfigError("segmentation epsilon must be >= 0");
    }
    if (seg.ellipse_samples < 8) {
      throw ConfigError("ellipse sample count must be >= 8, got " +
                        std::to_string(seg.ellipse_samples));
    }
    if (!(seg.ellipse_scale > 0.0)) {
      throw ConfigError("ellipse scale must be > 0");
    }
    if (!(seg.smooth_radius_px >= 0.0)) {
      throw ConfigError("smoothing radius must be >= 0");
    }
  }
}

std::vector<Violation> validate_image(const AnnotatedImage& img, ClassId num_classes) {
  std::vector<Violation> out;
  const std::size_t expected = static_cast<std::size_t>(img.map.width) * img.map.height;
  if (img.map.pixels.size() != expected) {
    out.push_back({"bad-grid", "pixel buffer holds " + std::to_string(img.map.pixels.size()) +
                                   " entries, expected " + std::to_string(expected)});
    return out;  // nothing else is meaningful on a malformed grid
  }

  std::set<InstanceId> map_ids;
  for (InstanceId id : img.map.pixels) {
    if (id != 0) map_ids.insert(id);
  }

  for (const auto& [id, cls] : img.classes) {
    if (id == 0) {
      out.push_back({"background-key", "class assignment keys background id 0"});
      continue;
    }
    if (!map_ids.contains(id)) {
      out.push_back({"dangling-id", "dangling id " + std::to_string(id) +
                                        " in class assignment, absent from map"});
    }
    if (cls == 0 || cls > num_classes) {
      out.push_back({"class-out-of-range", "instance " + std::to_string(id) + " has class " +
                                               std::to_string(cls) + ", valid range is 1.." +
                                               std::to_string(num_classes)});
    }
  }
  for (InstanceId id : map_ids) {
    if (!img.classes.contains(id)) {
      out.push_back({"missing-class", "instance " + std::to_string(id) + " has no class"});
    }
  }
  return out;
}

PixelSet instance_pixel_set(const InstanceMap& map, InstanceId id) {
  if (id == 0) throw UnknownInstanceError("id 0 is background, not an instance");
  PixelSet out;
  std::size_t idx = 0;
  for (std::uint32_t y = 0; y < map.height; ++y) {
    for (std::uint32_t x = 0; x < map.width; ++x, ++idx) {
      if (map.pixels[idx] == id) {
        out.push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
      }
    }
  }
  if (out.empty()) {
    throw UnknownInstanceError("unknown instance id " + std::to_string(id));
  }
  return out;  // row-major scan order is already canonical
}

PixelSet instance_pixel_set(const AnnotatedImage& img, InstanceId id) {
  return instance_pixel_set(img.map, id);
}

std::vector<InstanceId> instance_ids(const InstanceMap& map) {
  std::set<InstanceId> ids;
  for (InstanceId id : map.pixels) {
    if (id != 0) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

std::map<InstanceId, PixelSet> all_instance_pixel_sets(const InstanceMap& map) {
  std::map<InstanceId, PixelSet> sets;
  std::size_t idx = 0;
  for (std::uint32_t y = 0; y < map.height; ++y) {
    for (std::uint32_t x = 0; x < map.width; ++x, ++idx) {
      const InstanceId id = map.pixels[idx];
      if (id != 0) {
        sets[id].push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
      }
    }
  }
  return sets;  // scan order keeps each set canonical
}

std::map<InstanceId, std::size_t> instance_areas(const InstanceMap& map) {
  std::map<InstanceId, std::size_t> areas;
  for (InstanceId id : map.pixels) {
    if (id != 0) ++areas[id];
  }
  return areas;
}

std::map<ClassId, std::uint64_t> class_instance_counts(const std::vector<AnnotatedImage>& images) {
  std::map<ClassId, std::uint64_t> counts;
  for (const AnnotatedImage& img : images) {
    for (const auto& [id, cls] : img.classes) {
      (void)id;
      ++counts[cls];
    }
  }
  return counts;
}

}  // namespace snowbench::core
