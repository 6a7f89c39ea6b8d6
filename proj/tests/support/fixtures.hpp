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

#ifndef SNOWBENCH_TESTS_SUPPORT_FIXTURES_HPP_
#define SNOWBENCH_TESTS_SUPPORT_FIXTURES_HPP_

#include <string>
#include <vector>

#include "snowbench/core/rng.hpp"
#include "snowbench/core/types.hpp"
#include "snowbench/evaluation/matching.hpp"
#include "snowbench/evaluation/metrics.hpp"

namespace snowbench::testsupport {

struct InstanceSpecEntry {
  core::InstanceId id;
  core::ClassId cls;
  std::vector<core::Pixel> pixels;
};

inline core::AnnotatedImage make_image(const std::string& image_id, std::uint32_t width,
                                       std::uint32_t height,
                                       const std::vector<InstanceSpecEntry>& instances) {
  core::AnnotatedImage img;
  img.image_id = image_id;
  img.map = core::make_instance_map(width, height);
  for (const InstanceSpecEntry& inst : instances) {
    for (const core::Pixel& p : inst.pixels) img.map.at(p.x, p.y) = inst.id;
    img.classes[inst.id] = inst.cls;
  }
  return img;
}

inline eval::PredictedImage make_predicted(const std::string& image_id, std::uint32_t width,
                                           std::uint32_t height,
                                           const std::vector<InstanceSpecEntry>& instances) {
  const core::AnnotatedImage img = make_image(image_id, width, height, instances);
  eval::PredictedImage pred;
  pred.image_id = img.image_id;
  pred.map = img.map;
  pred.classes = img.classes;
  return pred;
}

inline std::vector<core::Pixel> rect_pixels(std::int32_t x0, std::int32_t y0, std::int32_t w,
                                            std::int32_t h) {
  std::vector<core::Pixel> out;
  for (std::int32_t y = y0; y < y0 + h; ++y) {
    for (std::int32_t x = x0; x < x0 + w; ++x) out.push_back({x, y});
  }
  return out;
}

inline std::vector<core::Pixel> disk_pixels(std::int32_t cx, std::int32_t cy, double r) {
  std::vector<core::Pixel> out;
  const auto ir = static_cast<std::int32_t>(r) + 1;
  for (std::int32_t y = cy - ir; y <= cy + ir; ++y) {
    for (std::int32_t x = cx - ir; x <= cx + ir; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r * r) out.push_back({x, y});
    }
  }
  return out;
}

// Dataset of single-pixel instances with exactly the given per-class
// counts, spread over several images. Classes are 1..counts.size().
inline core::Dataset single_pixel_dataset(const std::vector<std::uint64_t>& class_counts,
                                          std::uint32_t image_size = 128) {
  core::Dataset ds;
  ds.manifest.dataset = "synthetic";
  ds.manifest.num_classes = static_cast<core::ClassId>(class_counts.size());
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    ds.manifest.class_names.push_back("class" + std::to_string(c + 1));
  }

  const std::uint64_t per_image = static_cast<std::uint64_t>(image_size) * image_size;
  std::uint64_t remaining = 0;
  for (const std::uint64_t n : class_counts) remaining += n;

  std::size_t cls_index = 0;
  std::uint64_t emitted_in_class = 0;
  int image_no = 0;
  while (remaining > 0) {
    core::AnnotatedImage img;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "img%03d", image_no++);
    img.image_id = buf;
    img.map = core::make_instance_map(image_size, image_size);
    core::InstanceId next_id = 1;
    for (std::uint64_t slot = 0; slot < per_image && remaining > 0; ++slot) {
      while (cls_index < class_counts.size() && emitted_in_class >= class_counts[cls_index]) {
        ++cls_index;
        emitted_in_class = 0;
      }
      if (cls_index >= class_counts.size()) break;
      const auto x = static_cast<std::int32_t>(slot % image_size);
      const auto y = static_cast<std::int32_t>(slot / image_size);
      img.map.at(x, y) = next_id;
      img.classes[next_id] = static_cast<core::ClassId>(cls_index + 1);
      ++next_id;
      ++emitted_in_class;
      --remaining;
    }
    ds.images.push_back(std::move(img));
  }
  for (const core::AnnotatedImage& img : ds.images) {
    ds.manifest.images.push_back({img.image_id, "", img.metadata});
  }
  return ds;
}

// Random gt/pred pair for matcher stress tests: a few rectangles and
// disks each, with about half of the predicted shapes being jittered
// copies of annotations so overlaps, ties, and centroid rejections all
// occur. Later shapes paint over earlier ones; vanished ids are dropped.
inline std::pair<core::AnnotatedImage, eval::PredictedImage> random_match_pair(
    core::SplitMix64& rng, int max_instances = 8, std::uint32_t size = 48,
    core::ClassId num_classes = 3) {
  struct Shape {
    bool disk;
    std::int32_t x, y, w, h;
  };
  auto paint = [size](core::InstanceMap& map, const Shape& s, core::InstanceId id) {
    const std::vector<core::Pixel> pixels =
        s.disk ? disk_pixels(s.x, s.y, s.w / 2.0) : rect_pixels(s.x, s.y, s.w, s.h);
    for (const core::Pixel& p : pixels) {
      if (p.x >= 0 && p.y >= 0 && p.x < static_cast<std::int32_t>(size) &&
          p.y < static_cast<std::int32_t>(size)) {
        map.at(p.x, p.y) = id;
      }
    }
  };
  auto random_shape = [&rng, size]() {
    Shape s;
    s.disk = rng.next_below(2) == 0;
    s.x = static_cast<std::int32_t>(rng.next_below(size - 8));
    s.y = static_cast<std::int32_t>(rng.next_below(size - 8));
    s.w = 3 + static_cast<std::int32_t>(rng.next_below(10));
    s.h = 3 + static_cast<std::int32_t>(rng.next_below(10));
    return s;
  };

  core::AnnotatedImage gt;
  gt.image_id = "pair";
  gt.map = core::make_instance_map(size, size);
  std::vector<Shape> gt_shapes;
  const std::size_t gt_n = 1 + rng.next_below(static_cast<std::uint64_t>(max_instances));
  for (std::size_t i = 0; i < gt_n; ++i) {
    const Shape s = random_shape();
    gt_shapes.push_back(s);
    paint(gt.map, s, static_cast<core::InstanceId>(i + 1));
  }
  for (const core::InstanceId id : core::instance_ids(gt.map)) {
    gt.classes[id] = static_cast<core::ClassId>(1 + rng.next_below(num_classes));
  }

  eval::PredictedImage pred;
  pred.image_id = "pair";
  pred.map = core::make_instance_map(size, size);
  const std::size_t pred_n = 1 + rng.next_below(static_cast<std::uint64_t>(max_instances));
  for (std::size_t i = 0; i < pred_n; ++i) {
    Shape s;
    if (!gt_shapes.empty() && rng.next_below(2) == 0) {
      s = gt_shapes[rng.next_below(gt_shapes.size())];
      s.x += static_cast<std::int32_t>(rng.next_below(7)) - 3;
      s.y += static_cast<std::int32_t>(rng.next_below(7)) - 3;
    } else {
      s = random_shape();
    }
    paint(pred.map, s, static_cast<core::InstanceId>(i + 1));
  }
  for (const core::InstanceId id : core::instance_ids(pred.map)) {
    // Mostly real classes, occasionally the "other" sentinel.
    pred.classes[id] = rng.next_below(8) == 0
                           ? core::kOtherClass
                           : static_cast<core::ClassId>(1 + rng.next_below(num_classes));
  }
  return {std::move(gt), std::move(pred)};
}

// Pooled counts of a published three-class benchmark confusion matrix
// (rows: actual E/L/N plus a background row, columns: U / other / E / L / N):
//
//   bg:  ?   124  757  569   16
//   E : 874   22 4973   57    2
//   L : 440   18  157 5311   14
//   N :  21    0    2    3  105
//
// Totals: 10664 matches, 11999 annotated, 12130 predicted.
inline eval::EvalCounts published_cm_counts() {
  eval::EvalCounts counts;
  constexpr core::ClassId kE = 1, kL = 2, kN = 3;
  const core::ClassId other = core::kOtherClass;

  auto matched = [&counts](core::ClassId true_cls, core::ClassId pred_cls, std::int64_t n) {
    counts.matched_cm[{true_cls, pred_cls}] = n;
    counts.matched_gt_per_class[true_cls] += n;
    counts.matched_pred_per_class[pred_cls] += n;
    counts.matched_pred_per_true_class[true_cls] += n;
    counts.matches += n;
  };
  matched(kE, other, 22);
  matched(kE, kE, 4973);
  matched(kE, kL, 57);
  matched(kE, kN, 2);
  matched(kL, other, 18);
  matched(kL, kE, 157);
  matched(kL, kL, 5311);
  matched(kL, kN, 14);
  matched(kN, other, 0);
  matched(kN, kE, 2);
  matched(kN, kL, 3);
  matched(kN, kN, 105);

  counts.unmatched_gt_per_class = {{kE, 874}, {kL, 440}, {kN, 21}};
  counts.unmatched_pred_per_class = {{other, 124}, {kE, 757}, {kL, 569}, {kN, 16}};

  for (const core::ClassId c : {kE, kL, kN}) {
    counts.gt_per_class[c] =
        counts.matched_gt_per_class[c] + counts.unmatched_gt_per_class[c];
  }
  for (const core::ClassId c : {other, kE, kL, kN}) {
    counts.pred_per_class[c] =
        counts.matched_pred_per_class[c] + counts.unmatched_pred_per_class[c];
  }
  return counts;
}

}  // namespace snowbench::testsupport

#endif  // SNOWBENCH_TESTS_SUPPORT_FIXTURES_HPP_
