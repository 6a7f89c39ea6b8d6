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

#ifndef SNOWBENCH_EVALUATION_METRICS_HPP_
#define SNOWBENCH_EVALUATION_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snowbench/evaluation/matching.hpp"

namespace snowbench::eval {

// All ratios are percentages; Hausdorff distances are pixels. Undefined
// ratios (0/0) stay absent, never coerced to 0 or 100.

struct RatioStat {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct DetectionSection {
  std::map<core::ClassId, RatioStat> per_class;
  // Alternate tabulation: precision attributed to the true class of the
  // matched annotation instead of the predicted class.
  std::map<core::ClassId, std::optional<double>> precision_by_true_class;
  RatioStat overall;
  std::int64_t matches = 0;
  std::int64_t gt_total = 0;
  std::int64_t pred_total = 0;
};

struct ValueStats {
  std::optional<double> mean;
  std::optional<double> stddev;  // population standard deviation
  std::int64_t count = 0;
};

struct SegmentationSection {
  std::map<core::ClassId, ValueStats> iou_per_class;  // keyed by true class
  std::map<core::ClassId, ValueStats> hd_per_class;
  ValueStats iou_overall;
  ValueStats hd_overall;
  std::int64_t over_seg_count = 0;
  std::int64_t under_seg_count = 0;
  std::int64_t fp_count = 0;
  std::int64_t fn_count = 0;
};

// Raw confusion matrix with detection bookkeeping plus its row-normalized
// form over well-detected instances only.
//
// raw is (K+1) x (K+2): row 0 is the background/unannotated row, rows
// 1..K the true classes; column 0 is "U" (undetected), column 1 "other",
// columns 2..K+1 the predicted classes. The background x U cell is
// meaningless and stays 0.
//
// ncm is K x (K+1): rows are true classes 1..K, column 0 "other", columns
// 1..K predicted classes, each defined row summing to 100.
struct ConfusionTables {
  int num_classes = 0;
  std::vector<std::vector<std::int64_t>> raw;
  std::vector<std::vector<double>> ncm;
  std::vector<bool> row_defined;  // per true class, detected count > 0

  std::int64_t detected(core::ClassId cls) const;  // row sum excluding U
};

struct ClassificationClassStats {
  std::int64_t nuclei = 0;  // well-detected instances of the class
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct ClassificationSection {
  std::optional<double> balanced_accuracy;  // mean NCM diagonal over defined rows
  std::map<core::ClassId, ClassificationClassStats> per_class;
};

struct MetricsReport {
  std::vector<std::string> class_names;  // index 0 = class 1
  DetectionSection detection;
  SegmentationSection segmentation;
  ClassificationSection classification;
  ConfusionTables tables;
};

// Pooled counts; the single-image operations and the dataset evaluation
// share this accumulator ("pool counts, then take ratios").
struct EvalCounts {
  std::map<core::ClassId, std::int64_t> gt_per_class;
  std::map<core::ClassId, std::int64_t> pred_per_class;  // includes kOtherClass
  std::int64_t matches = 0;
  std::map<core::ClassId, std::int64_t> matched_gt_per_class;
  std::map<core::ClassId, std::int64_t> matched_pred_per_class;  // by predicted class
  std::map<core::ClassId, std::int64_t> matched_pred_per_true_class;
  // matched_cm[(true, predicted)] with predicted possibly kOtherClass.
  std::map<std::pair<core::ClassId, core::ClassId>, std::int64_t> matched_cm;
  std::map<core::ClassId, std::int64_t> unmatched_gt_per_class;    // U column
  std::map<core::ClassId, std::int64_t> unmatched_pred_per_class;  // background row

  void add(const MatchSet& ms, const core::ClassAssignment& gt_classes,
           const std::map<core::InstanceId, core::ClassId>& pred_classes);
};

DetectionSection detection_metrics(const EvalCounts& counts, int num_classes);
DetectionSection detection_metrics(const MatchSet& ms, const core::ClassAssignment& gt_classes,
                                   const std::map<core::InstanceId, core::ClassId>& pred_classes,
                                   int num_classes);

// Per-pair IoU and Hausdorff distance between matched masks plus the
// over-/under-segmentation and FP/FN counts for one image.
SegmentationSection segmentation_metrics(const MatchSet& ms, const core::AnnotatedImage& gt,
                                         const PredictedImage& pred,
                                         OverlapCriterion criterion = OverlapCriterion::kCoverage);

ConfusionTables build_confusion(const EvalCounts& counts, int num_classes);
ConfusionTables build_confusion(const MatchSet& ms, const core::ClassAssignment& gt_classes,
                                const std::map<core::InstanceId, core::ClassId>& pred_classes,
                                int num_classes);

// Balanced metrics from the normalized confusion matrix: recall is the
// NCM diagonal, precision normalizes the diagonal by its NCM column sum,
// balanced accuracy averages the diagonal over defined rows.
ClassificationSection classification_metrics(const ConfusionTables& tables);

struct EvalConfig {
  OverlapCriterion overseg_criterion = OverlapCriterion::kCoverage;
  int threads = 1;
};

struct ImageBreakdown {
  std::string image_id;
  MatchSet match_set;
  std::int64_t over_seg = 0;
  std::int64_t under_seg = 0;
  DetectionSection detection;  // per-image tabulation, both precision attributions
};

// Pools per-image match sets dataset-wide before computing any ratio.
// The ground-truth and predicted collections must cover the same image
// ids; otherwise IdSetMismatchError is raised and no report is produced.
MetricsReport evaluate_dataset(const core::Dataset& gt,
                               const std::vector<PredictedImage>& pred, const EvalConfig& config,
                               std::vector<ImageBreakdown>* breakdowns = nullptr);

}  // namespace snowbench::eval

#endif  // SNOWBENCH_EVALUATION_METRICS_HPP_
