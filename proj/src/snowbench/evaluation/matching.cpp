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

#include "snowbench/evaluation/matching.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "snowbench/core/error.hpp"

namespace snowbench::eval {

namespace {

struct PairKey {
  core::InstanceId gt = 0;
  core::InstanceId pred = 0;
  friend bool operator<(const PairKey& a, const PairKey& b) {
    return a.gt != b.gt ? a.gt < b.gt : a.pred < b.pred;
  }
};

struct Overlaps {
  std::map<core::InstanceId, std::int64_t> gt_area;
  std::map<core::InstanceId, std::int64_t> pred_area;
  std::map<PairKey, std::int64_t> intersection;
};

Overlaps compute_overlaps(const core::InstanceMap& gt, const core::InstanceMap& pred) {
  Overlaps o;
  for (std::size_t i = 0; i < gt.pixels.size(); ++i) {
    const core::InstanceId g = gt.pixels[i];
    const core::InstanceId p = pred.pixels[i];
    if (g != 0) ++o.gt_area[g];
    if (p != 0) ++o.pred_area[p];
    if (g != 0 && p != 0) ++o.intersection[{g, p}];
  }
  return o;
}

std::int32_t round_half_negative(double v) {
  return static_cast<std::int32_t>(std::ceil(v - 0.5));
}

}  // namespace

std::vector<core::Violation> validate_predicted(const PredictedImage& img,
                                                core::ClassId num_classes) {
  core::AnnotatedImage view;
  view.image_id = img.image_id;
  view.map = img.map;
  view.classes = img.classes;
  std::vector<core::Violation> out = core::validate_image(view, num_classes);
  // kOtherClass is legal on predictions; drop the range complaints it causes.
  std::erase_if(out, [&](const core::Violation& v) {
    if (v.code != "class-out-of-range") return false;
    return v.message.find("class " + std::to_string(core::kOtherClass)) != std::string::npos;
  });
  return out;
}

MatchSet match_instances(const core::AnnotatedImage& gt, const PredictedImage& pred) {
  if (gt.map.width != pred.map.width || gt.map.height != pred.map.height) {
    throw DimensionMismatchError("ground truth is " + std::to_string(gt.map.width) + "x" +
                                 std::to_string(gt.map.height) + ", prediction is " +
                                 std::to_string(pred.map.width) + "x" +
                                 std::to_string(pred.map.height));
  }
  const Overlaps o = compute_overlaps(gt.map, pred.map);

  // Predicted centroids, rounded to their membership-test pixel.
  std::map<core::InstanceId, std::pair<double, double>> sums;
  std::map<core::InstanceId, std::int64_t> counts;
  const auto w = static_cast<std::int32_t>(pred.map.width);
  const auto h = static_cast<std::int32_t>(pred.map.height);
  for (std::int32_t y = 0; y < h; ++y) {
    for (std::int32_t x = 0; x < w; ++x) {
      const core::InstanceId p = pred.map.at(x, y);
      if (p == 0) continue;
      sums[p].first += x;
      sums[p].second += y;
      ++counts[p];
    }
  }
  std::map<core::InstanceId, core::Pixel> centroid_pixel;
  for (const auto& [id, sum] : sums) {
    const double n = static_cast<double>(counts.at(id));
    centroid_pixel[id] = {round_half_negative(sum.first / n), round_half_negative(sum.second / n)};
  }

  std::vector<Match> candidates;
  candidates.reserve(o.intersection.size());
  for (const auto& [key, inter] : o.intersection) {
    const std::int64_t uni = o.gt_area.at(key.gt) + o.pred_area.at(key.pred) - inter;
    candidates.push_back({key.gt, key.pred, static_cast<double>(inter) / static_cast<double>(uni)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Match& a, const Match& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return a.gt_id != b.gt_id ? a.gt_id < b.gt_id : a.pred_id < b.pred_id;
  });

  MatchSet ms;
  std::set<core::InstanceId> matched_gt, matched_pred;
  for (const Match& cand : candidates) {
    if (matched_gt.contains(cand.gt_id) || matched_pred.contains(cand.pred_id)) continue;
    const core::Pixel c = centroid_pixel.at(cand.pred_id);
    const bool centroid_inside = gt.map.in_bounds(c.x, c.y) && gt.map.at(c.x, c.y) == cand.gt_id;
    if (centroid_inside) {
      ms.matches.push_back(cand);
      matched_gt.insert(cand.gt_id);
      matched_pred.insert(cand.pred_id);
    } else {
      ms.rejected_by_centroid.push_back(cand);
    }
  }
  for (const auto& [id, area] : o.gt_area) {
    (void)area;
    if (!matched_gt.contains(id)) ms.unmatched_gt.push_back(id);
  }
  for (const auto& [id, area] : o.pred_area) {
    (void)area;
    if (!matched_pred.contains(id)) ms.unmatched_pred.push_back(id);
  }
  return ms;
}

namespace {

std::vector<core::InstanceId> find_absorbed(const std::vector<core::InstanceId>& unmatched_own,
                                            const std::set<core::InstanceId>& matched_other,
                                            const Overlaps& o, bool own_is_pred,
                                            OverlapCriterion criterion) {
  std::vector<core::InstanceId> flagged;
  for (const core::InstanceId own : unmatched_own) {
    const std::int64_t own_area = own_is_pred ? o.pred_area.at(own) : o.gt_area.at(own);
    bool hit = false;
    for (const auto& [key, inter] : o.intersection) {
      const core::InstanceId own_id = own_is_pred ? key.pred : key.gt;
      const core::InstanceId other_id = own_is_pred ? key.gt : key.pred;
      if (own_id != own || !matched_other.contains(other_id)) continue;
      const std::int64_t other_area = own_is_pred ? o.gt_area.at(other_id) : o.pred_area.at(other_id);
      const double overlap =
          criterion == OverlapCriterion::kCoverage
              ? static_cast<double>(inter) / static_cast<double>(own_area)
              : static_cast<double>(inter) / static_cast<double>(own_area + other_area - inter);
      if (overlap >= 0.5) {
        hit = true;
        break;
      }
    }
    if (hit) flagged.push_back(own);
  }
  return flagged;
}

}  // namespace

std::vector<core::InstanceId> find_over_segmentation(const MatchSet& ms,
                                                     const core::AnnotatedImage& gt,
                                                     const PredictedImage& pred,
                                                     OverlapCriterion criterion) {
  const Overlaps o = compute_overlaps(gt.map, pred.map);
  std::set<core::InstanceId> matched_gt;
  for (const Match& m : ms.matches) matched_gt.insert(m.gt_id);
  return find_absorbed(ms.unmatched_pred, matched_gt, o, /*own_is_pred=*/true, criterion);
}

std::vector<core::InstanceId> find_under_segmentation(const MatchSet& ms,
                                                      const core::AnnotatedImage& gt,
                                                      const PredictedImage& pred,
                                                      OverlapCriterion criterion) {
  const Overlaps o = compute_overlaps(gt.map, pred.map);
  std::set<core::InstanceId> matched_pred;
  for (const Match& m : ms.matches) matched_pred.insert(m.pred_id);
  return find_absorbed(ms.unmatched_gt, matched_pred, o, /*own_is_pred=*/false, criterion);
}

}  // namespace snowbench::eval
