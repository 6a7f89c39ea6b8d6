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

#ifndef SNOWBENCH_CORE_TYPES_HPP_
#define SNOWBENCH_CORE_TYPES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace snowbench::core {

// Instance ids are unique per image, not globally; 0 is background.
using InstanceId = std::uint32_t;

// Class ids: 0 is background, 1..K are the classes of interest.
using ClassId = std::uint16_t;

// Prediction-only sentinel: detected but not assigned to a class of
// interest. Never valid on ground-truth annotations.
inline constexpr ClassId kOtherClass = 0xFFFF;

struct Pixel {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  // Row-major order (y, then x), matching grid scan order.
  friend bool operator<(const Pixel& a, const Pixel& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

// Canonical set of pixels: sorted row-major, no duplicates.
using PixelSet = std::vector<Pixel>;

// Per-pixel instance labeling. Connectivity of one id's pixels is not
// required: tiling and merging legitimately produce clipped or
// multi-lobed instances.
struct InstanceMap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<InstanceId> pixels;  // row-major, width * height entries

  InstanceId at(std::int32_t x, std::int32_t y) const {
    return pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
  }
  InstanceId& at(std::int32_t x, std::int32_t y) {
    return pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
  }
  bool in_bounds(std::int32_t x, std::int32_t y) const {
    return x >= 0 && y >= 0 && x < static_cast<std::int32_t>(width) &&
           y < static_cast<std::int32_t>(height);
  }

  friend bool operator==(const InstanceMap&, const InstanceMap&) = default;
};

InstanceMap make_instance_map(std::uint32_t width, std::uint32_t height);

// Instance id -> class id. Keeping classes per instance (not per pixel)
// makes "every pixel of an instance has one class" structural.
using ClassAssignment = std::map<InstanceId, ClassId>;

struct AnnotatedImage {
  std::string image_id;
  InstanceMap map;
  ClassAssignment classes;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

// Contour-noise settings. epsilon_px is the polyline simplification
// tolerance; ellipse_scale scales the fitted semi-axes before sampling.
struct SegmentationNoise {
  double epsilon_px = 2.0;
  double ellipse_scale = 1.0;
  int ellipse_samples = 64;
  bool merge_enabled = false;
  double smooth_radius_px = 3.0;

  friend bool operator==(const SegmentationNoise&, const SegmentationNoise&) = default;
};

// Full corruption configuration; together with the input dataset this is
// the reproducibility contract. Stages always compose as
// detection -> segmentation -> classification.
struct NoiseSpec {
  double detection_rho = 0.0;
  double classification_rho = 0.0;
  std::optional<SegmentationNoise> segmentation;
  std::uint64_t seed = 0;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

// Throws ConfigError on out-of-range fields (rho outside [0,1),
// epsilon < 0, samples < 8, smoothing radius < 0).
void validate_noise_spec(const NoiseSpec& spec);

struct ImageEntry {
  std::string image_id;
  std::string container;  // path relative to the manifest file
  std::map<std::string, std::string> metadata;

  friend bool operator==(const ImageEntry&, const ImageEntry&) = default;
};

struct Provenance {
  NoiseSpec noise_spec;
  std::string parent_manifest;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct DatasetManifest {
  std::string dataset;
  ClassId num_classes = 0;
  std::vector<std::string> class_names;
  std::vector<ImageEntry> images;
  std::optional<Provenance> provenance;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// A manifest together with its loaded images, in manifest order.
struct Dataset {
  DatasetManifest manifest;
  std::vector<AnnotatedImage> images;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct Violation {
  std::string code;     // "dangling-id", "missing-class", "class-out-of-range", ...
  std::string message;  // human-readable, names the offending id
};

// Reports every invariant violation; an empty list means the image is
// valid. Violations are data, not errors: this never throws.
std::vector<Violation> validate_image(const AnnotatedImage& img, ClassId num_classes);

// Exact pixel set labeled `id`. Throws UnknownInstanceError when `id` is
// absent or zero.
PixelSet instance_pixel_set(const AnnotatedImage& img, InstanceId id);
PixelSet instance_pixel_set(const InstanceMap& map, InstanceId id);

// All nonzero ids present in the map, ascending.
std::vector<InstanceId> instance_ids(const InstanceMap& map);

// Pixel sets of every nonzero id, collected in one grid pass.
std::map<InstanceId, PixelSet> all_instance_pixel_sets(const InstanceMap& map);

// Pixel count per nonzero id.
std::map<InstanceId, std::size_t> instance_areas(const InstanceMap& map);

// Dataset-wide instance count per class.
std::map<ClassId, std::uint64_t> class_instance_counts(const std::vector<AnnotatedImage>& images);

}  // namespace snowbench::core

#endif  // SNOWBENCH_CORE_TYPES_HPP_
