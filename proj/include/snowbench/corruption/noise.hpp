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

#ifndef SNOWBENCH_CORRUPTION_NOISE_HPP_
#define SNOWBENCH_CORRUPTION_NOISE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snowbench/core/types.hpp"

namespace snowbench::corrupt {

// Noise transition matrices Q[i][j] = P(corrupted = i | true = j).

// Detection noise is asymmetric: annotations vanish into the background,
// the background never grows annotations. Rows/columns are (background,
// class): [[1, rho], [0, 1 - rho]].
std::array<std::array<double, 2>, 2> detection_noise_matrix(double rho);

// Symmetric class exchange over K classes: diagonal 1 - rho, off-diagonal
// rho / (K - 1).
std::vector<std::vector<double>> classification_noise_matrix(double rho, int num_classes);

struct RemovalRecord {
  std::string image_id;
  core::InstanceId id = 0;
  core::ClassId cls = 0;

  friend bool operator==(const RemovalRecord&, const RemovalRecord&) = default;
};

struct RelabelRecord {
  std::string image_id;
  core::InstanceId id = 0;
  core::ClassId old_cls = 0;
  core::ClassId new_cls = 0;

  friend bool operator==(const RelabelRecord&, const RelabelRecord&) = default;
};

struct MergeRecord {
  std::string image_id;
  core::InstanceId kept = 0;
  core::InstanceId absorbed = 0;
  core::ClassId cls = 0;
  std::uint64_t border = 0;  // shared 4-adjacent pixel pairs before merging

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

enum class DistortFallback : std::uint8_t {
  kNone = 0,           // regular ellipse fit
  kExtentEllipse = 1,  // fit degenerated; used the axis-aligned extent ellipse
  kKeptOriginal = 2,   // replacement mask came out empty; original kept
};

struct DistortRecord {
  std::string image_id;
  core::InstanceId id = 0;
  std::uint64_t old_pixels = 0;
  std::uint64_t new_pixels = 0;
  std::uint32_t vertices = 0;  // simplified polygon size
  DistortFallback fallback = DistortFallback::kNone;

  friend bool operator==(const DistortRecord&, const DistortRecord&) = default;
};

// Full provenance of one corruption run. Replaying it against the clean
// dataset reproduces the corrupted dataset bit-exactly.
struct CorruptionLog {
  core::NoiseSpec spec;
  std::vector<RemovalRecord> removals;
  std::vector<DistortRecord> distortions;
  std::vector<MergeRecord> merges;
  std::vector<RelabelRecord> relabels;

  friend bool operator==(const CorruptionLog&, const CorruptionLog&) = default;
};

// Removes exactly round(rho * n_c) instances per class c, where n_c is
// the dataset-wide count, chosen by a seeded shuffle of the globally
// sorted (image_id, instance_id) list of that class. Removed instances
// become background; the background never becomes foreground.
std::pair<core::Dataset, CorruptionLog> apply_detection_noise(const core::Dataset& dataset,
                                                              double rho, std::uint64_t seed);

// Relabels exactly round(rho * n_c) instances per class c (same selection
// scheme); each new class is drawn uniformly from the other K - 1
// classes. Instance geometry is untouched. Requires num_classes >= 2
// when rho > 0.
std::pair<core::Dataset, CorruptionLog> apply_classification_noise(const core::Dataset& dataset,
                                                                   double rho, std::uint64_t seed,
                                                                   int num_classes);

// Replaces every instance mask with a simplified-ellipse approximation:
// trace the contour, fit an ellipse by algebraic distance, scale the
// semi-axes, sample the ellipse, simplify the polygon at epsilon_px, and
// rasterize. Degenerate fits fall back to the axis-aligned extent
// ellipse. A distorted instance never takes pixels owned by another
// surviving instance in the input map, and contested new background
// pixels stay background; an instance whose replacement comes out empty
// keeps its original mask (distortion must not delete instances).
// The seed is accepted for interface stability; the distortion path is
// fully deterministic.
std::pair<core::AnnotatedImage, std::vector<DistortRecord>> distort_contours(
    const core::AnnotatedImage& image, double epsilon_px, double ellipse_scale,
    int ellipse_samples, std::uint64_t seed);

// Under-segmentation: merges same-class adjacent pairs (shared 4-border
// >= 1 pixel pair). Conflicts resolve greedily by descending border size
// (ties by lexicographic id pair), each instance merging at most once.
// The smaller id survives; the merged mask is smoothed by morphological
// closing, converting only background pixels.
std::pair<core::AnnotatedImage, std::vector<MergeRecord>> merge_adjacent(
    const core::AnnotatedImage& image, double smooth_radius_px);

// Full pipeline in the fixed order detection -> segmentation (distort,
// then merge when enabled) -> classification, each stage drawing
// independent sub-seeds from spec.seed. Classification percentages are
// computed on post-merge instance counts.
std::pair<core::Dataset, CorruptionLog> apply_noise_pipeline(const core::Dataset& dataset,
                                                             const core::NoiseSpec& spec,
                                                             int threads = 1);

// Reapplies a recorded run to the clean dataset: removals and relabels
// are applied literally; the segmentation stage is recomputed from the
// spec and cross-checked against the recorded events. Any disagreement
// with the log raises DataError.
core::Dataset replay_log(const core::Dataset& clean, const CorruptionLog& log, int threads = 1);

}  // namespace snowbench::corrupt

#endif  // SNOWBENCH_CORRUPTION_NOISE_HPP_
