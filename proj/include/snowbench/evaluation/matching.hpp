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

#ifndef SNOWBENCH_EVALUATION_MATCHING_HPP_
#define SNOWBENCH_EVALUATION_MATCHING_HPP_

#include <map>
#include <string>
#include <vector>

#include "snowbench/core/types.hpp"

namespace snowbench::eval {

// Model output for one image. Classes may carry kOtherClass: detected but
// not assigned to any class of interest.
struct PredictedImage {
  std::string image_id;
  core::InstanceMap map;
  std::map<core::InstanceId, core::ClassId> classes;

  friend bool operator==(const PredictedImage&, const PredictedImage&) = default;
};

// Like validate_image, but kOtherClass is legal.
std::vector<core::Violation> validate_predicted(const PredictedImage& img,
                                                core::ClassId num_classes);

struct Match {
  core::InstanceId gt_id = 0;
  core::InstanceId pred_id = 0;
  double iou = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchSet {
  std::vector<Match> matches;
  std::vector<core::InstanceId> unmatched_gt;    // false negatives (the "U" column)
  std::vector<core::InstanceId> unmatched_pred;  // false positives (the background row)
  std::vector<Match> rejected_by_centroid;       // audit trail

  friend bool operator==(const MatchSet&, const MatchSet&) = default;
};

// Greedy matching rule: among all annotated/predicted pairs with positive
// IoU, repeatedly take the highest-IoU pair over still-unmatched objects
// (ties by ascending (gt_id, pred_id)); the pair becomes a match when the
// predicted instance's centroid pixel lies inside the annotation,
// otherwise the pair alone is discarded and both objects stay available.
// The centroid pixel is the real-valued centroid rounded to the nearest
// integer coordinate, halves toward negative infinity.
MatchSet match_instances(const core::AnnotatedImage& gt, const PredictedImage& pred);

enum class OverlapCriterion {
  kCoverage,  // |own and other| / |own area| ("surface predominantly belongs")
  kIou,       // literal IoU reading
};

// Unmatched predictions whose surface predominantly (overlap >= 0.5)
// belongs to an already-matched annotation. Flagged objects remain false
// positives. Returned ids ascending.
std::vector<core::InstanceId> find_over_segmentation(
    const MatchSet& ms, const core::AnnotatedImage& gt, const PredictedImage& pred,
    OverlapCriterion criterion = OverlapCriterion::kCoverage);

// Converse: unmatched annotations predominantly covered by an
// already-matched prediction. Flagged objects remain false negatives.
std::vector<core::InstanceId> find_under_segmentation(
    const MatchSet& ms, const core::AnnotatedImage& gt, const PredictedImage& pred,
    OverlapCriterion criterion = OverlapCriterion::kCoverage);

}  // namespace snowbench::eval

#endif  // SNOWBENCH_EVALUATION_MATCHING_HPP_
