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

#include "snowbench/evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "snowbench/core/error.hpp"
#include "snowbench/core/parallel.hpp"
#include "snowbench/geometry/pixel_ops.hpp"

namespace snowbench::eval {

namespace {

std::optional<double> ratio_percent(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;  // undefined, never coerced to 0
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> harmonic_f1(const std::optional<double>& p, const std::optional<double>& r) {
  if (!p.has_value() || !r.has_value()) return std::nullopt;
  if (*p + *r <= 0.0) return std::nullopt;
  return 2.0 * *p * *r / (*p + *r);
}

ValueStats summarize(const std::vector<double>& values) {
  ValueStats s;
  s.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  s.mean = mean;
  s.stddev = std::sqrt(var);
  return s;
}

std::int64_t lookup(const std::map<core::ClassId, std::int64_t>& m, core::ClassId key) {
  const auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

void EvalCounts::add(const MatchSet& ms, const core::ClassAssignment& gt_classes,
                     const std::map<core::InstanceId, core::ClassId>& pred_classes) {
  for (const auto& [id, cls] : gt_classes) {
    (void)id;
    ++gt_per_class[cls];
  }
  for (const auto& [id, cls] : pred_classes) {
    (void)id;
    ++pred_per_class[cls];
  }
  matches += static_cast<std::int64_t>(ms.matches.size());
  for (const Match& m : ms.matches) {
    const core::ClassId true_cls = gt_classes.at(m.gt_id);
    const core::ClassId pred_cls = pred_classes.at(m.pred_id);
    ++matched_gt_per_class[true_cls];
    ++matched_pred_per_class[pred_cls];
    ++matched_pred_per_true_class[true_cls];
    ++matched_cm[{true_cls, pred_cls}];
  }
  for (const core::InstanceId id : ms.unmatched_gt) ++unmatched_gt_per_class[gt_classes.at(id)];
  for (const core::InstanceId id : ms.unmatched_pred) {
    ++unmatched_pred_per_class[pred_classes.at(id)];
  }
}

DetectionSection detection_metrics(const EvalCounts& counts, int num_classes) {
  DetectionSection section;
  std::int64_t gt_total = 0, pred_total = 0;
  for (const auto& [cls, n] : counts.gt_per_class) {
    (void)cls;
    gt_total += n;
  }
  for (const auto& [cls, n] : counts.pred_per_class) {
    (void)cls;
    pred_total += n;
  }
  section.matches = counts.matches;
  section.gt_total = gt_total;
  section.pred_total = pred_total;

  for (int c = 1; c <= num_classes; ++c) {
    const auto cls = static_cast<core::ClassId>(c);
    RatioStat stat;
    // Per-class precision attributes a matched prediction to its
    // PREDICTED class; "other" predictions only count in the overall.
    stat.precision =
        ratio_percent(lookup(counts.matched_pred_per_class, cls), lookup(counts.pred_per_class, cls));
    stat.recall =
        ratio_percent(lookup(counts.matched_gt_per_class, cls), lookup(counts.gt_per_class, cls));
    stat.f1 = harmonic_f1(stat.precision, stat.recall);
    section.per_class[cls] = stat;

    const std::int64_t matched_true = lookup(counts.matched_pred_per_true_class, cls);
    const std::int64_t fp_pred = lookup(counts.unmatched_pred_per_class, cls);
    section.precision_by_true_class[cls] = ratio_percent(matched_true, matched_true + fp_pred);
  }
  section.overall.precision = ratio_percent(counts.matches, pred_total);
  section.overall.recall = ratio_percent(counts.matches, gt_total);
  section.overall.f1 = harmonic_f1(section.overall.precision, section.overall.recall);
  return section;
}

DetectionSection detection_metrics(const MatchSet& ms, const core::ClassAssignment& gt_classes,
                                   const std::map<core::InstanceId, core::ClassId>& pred_classes,
                                   int num_classes) {
  EvalCounts counts;
  counts.add(ms, gt_classes, pred_classes);
  return detection_metrics(counts, num_classes);
}

SegmentationSection segmentation_metrics(const MatchSet& ms, const core::AnnotatedImage& gt,
                                         const PredictedImage& pred, OverlapCriterion criterion) {
  SegmentationSection section;
  const std::map<core::InstanceId, core::PixelSet> gt_sets = core::all_instance_pixel_sets(gt.map);
  const std::map<core::InstanceId, core::PixelSet> pred_sets =
      core::all_instance_pixel_sets(pred.map);

  std::map<core::ClassId, std::vector<double>> iou_values, hd_values;
  std::vector<double> iou_all, hd_all;
  for (const Match& m : ms.matches) {
    const core::ClassId cls = gt.classes.at(m.gt_id);
    const double iou_pct = 100.0 * m.iou;
    const double hd = geom::hausdorff(gt_sets.at(m.gt_id), pred_sets.at(m.pred_id));
    iou_values[cls].push_back(iou_pct);
    hd_values[cls].push_back(hd);
    iou_all.push_back(iou_pct);
    hd_all.push_back(hd);
  }
  for (const auto& [cls, values] : iou_values) section.iou_per_class[cls] = summarize(values);
  for (const auto& [cls, values] : hd_values) section.hd_per_class[cls] = summarize(values);
  section.iou_overall = summarize(iou_all);
  section.hd_overall = summarize(hd_all);
  section.over_seg_count =
      static_cast<std::int64_t>(find_over_segmentation(ms, gt, pred, criterion).size());
  section.under_seg_count =
      static_cast<std::int64_t>(find_under_segmentation(ms, gt, pred, criterion).size());
  section.fp_count = static_cast<std::int64_t>(ms.unmatched_pred.size());
  section.fn_count = static_cast<std::int64_t>(ms.unmatched_gt.size());
  return section;
}

std::int64_t ConfusionTables::detected(core::ClassId cls) const {
  std::int64_t total = 0;
  for (std::size_t col = 1; col < raw[cls].size(); ++col) total += raw[cls][col];
  return total;
}

ConfusionTables build_confusion(const EvalCounts& counts, int num_classes) {
  ConfusionTables tables;
  tables.num_classes = num_classes;
  tables.raw.assign(static_cast<std::size_t>(num_classes) + 1,
                    std::vector<std::int64_t>(static_cast<std::size_t>(num_classes) + 2, 0));
  tables.ncm.assign(static_cast<std::size_t>(num_classes),
                    std::vector<double>(static_cast<std::size_t>(num_classes) + 1, 0.0));
  tables.row_defined.assign(static_cast<std::size_t>(num_classes), false);

  // Column layout: 0 = U, 1 = other, 1 + d = predicted class d.
  auto pred_col = [num_classes](core::ClassId cls) -> std::size_t {
    if (cls == core::kOtherClass) return 1;
    if (cls >= 1 && cls <= num_classes) return 1 + static_cast<std::size_t>(cls);
    throw DataError("predicted class " + std::to_string(cls) + " out of range");
  };

  for (int c = 1; c <= num_classes; ++c) {
    const auto cls = static_cast<core::ClassId>(c);
    tables.raw[static_cast<std::size_t>(c)][0] = lookup(counts.unmatched_gt_per_class, cls);
  }
  for (const auto& [key, n] : counts.matched_cm) {
    const auto [true_cls, predicted] = key;
    if (true_cls < 1 || true_cls > num_classes) {
      throw DataError("true class " + std::to_string(true_cls) + " out of range");
    }
    tables.raw[true_cls][pred_col(predicted)] += n;
  }
  for (const auto& [cls, n] : counts.unmatched_pred_per_class) {
    tables.raw[0][pred_col(cls)] += n;
  }

  for (int c = 1; c <= num_classes; ++c) {
    const std::int64_t detected = tables.detected(static_cast<core::ClassId>(c));
    if (detected == 0) continue;  // undefined row, excluded from balanced means
    tables.row_defined[static_cast<std::size_t>(c - 1)] = true;
    for (int col = 0; col <= num_classes; ++col) {
      tables.ncm[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(col)] =
          100.0 * static_cast<double>(tables.raw[static_cast<std::size_t>(c)]
                                                [static_cast<std::size_t>(col) + 1]) /
          static_cast<double>(detected);
    }
  }
  return tables;
}

ConfusionTables build_confusion(const MatchSet& ms, const core::ClassAssignment& gt_classes,
                                const std::map<core::InstanceId, core::ClassId>& pred_classes,
                                int num_classes) {
  EvalCounts counts;
  counts.add(ms, gt_classes, pred_classes);
  return build_confusion(counts, num_classes);
}

ClassificationSection classification_metrics(const ConfusionTables& tables) {
  ClassificationSection section;
  const int k = tables.num_classes;

  // NCM column sums over defined rows, for the balanced precision.
  std::vector<double> column_sum(static_cast<std::size_t>(k) + 1, 0.0);
  for (int r = 0; r < k; ++r) {
    if (!tables.row_defined[static_cast<std::size_t>(r)]) continue;
    for (int col = 0; col <= k; ++col) {
      column_sum[static_cast<std::size_t>(col)] += tables.ncm[static_cast<std::size_t>(r)]
                                                             [static_cast<std::size_t>(col)];
    }
  }

  double diagonal_sum = 0.0;
  int defined_rows = 0;
  for (int c = 1; c <= k; ++c) {
    ClassificationClassStats stats;
    stats.nuclei = tables.detected(static_cast<core::ClassId>(c));
    if (tables.row_defined[static_cast<std::size_t>(c - 1)]) {
      const double diag = tables.ncm[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(c)];
      stats.recall = diag;
      if (column_sum[static_cast<std::size_t>(c)] > 0.0) {
        stats.precision = 100.0 * diag / column_sum[static_cast<std::size_t>(c)];
      }
      stats.f1 = harmonic_f1(stats.precision, stats.recall);
      diagonal_sum += diag;
      ++defined_rows;
    }
    section.per_class[static_cast<core::ClassId>(c)] = stats;
  }
  if (defined_rows > 0) {
    section.balanced_accuracy = diagonal_sum / static_cast<double>(defined_rows);
  }
  return section;
}

MetricsReport evaluate_dataset(const core::Dataset& gt, const std::vector<PredictedImage>& pred,
                               const EvalConfig& config, std::vector<ImageBreakdown>* breakdowns) {
  std::map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < pred.size(); ++i) pred_index[pred[i].image_id] = i;
  std::set<std::string> gt_ids;
  for (const core::AnnotatedImage& img : gt.images) gt_ids.insert(img.image_id);
  for (const core::AnnotatedImage& img : gt.images) {
    if (!pred_index.contains(img.image_id)) {
      throw IdSetMismatchError("no prediction for image '" + img.image_id + "'");
    }
  }
  for (const PredictedImage& img : pred) {
    if (!gt_ids.contains(img.image_id)) {
      throw IdSetMismatchError("prediction for unknown image '" + img.image_id + "'");
    }
  }

  struct PerImage {
    MatchSet ms;
    std::int64_t over_seg = 0;
    std::int64_t under_seg = 0;
    std::vector<std::pair<core::ClassId, double>> iou_by_class;
    std::vector<std::pair<core::ClassId, double>> hd_by_class;
  };
  std::vector<PerImage> results(gt.images.size());

  core::parallel_for(gt.images.size(), config.threads, [&](std::size_t i) {
    const core::AnnotatedImage& g = gt.images[i];
    const PredictedImage& p = pred[pred_index.at(g.image_id)];
    PerImage r;
    r.ms = match_instances(g, p);
    r.over_seg = static_cast<std::int64_t>(
        find_over_segmentation(r.ms, g, p, config.overseg_criterion).size());
    r.under_seg = static_cast<std::int64_t>(
        find_under_segmentation(r.ms, g, p, config.overseg_criterion).size());
    const auto gt_sets = core::all_instance_pixel_sets(g.map);
    const auto pred_sets = core::all_instance_pixel_sets(p.map);
    for (const Match& m : r.ms.matches) {
      const core::ClassId cls = g.classes.at(m.gt_id);
      r.iou_by_class.emplace_back(cls, 100.0 * m.iou);
      r.hd_by_class.emplace_back(cls, geom::hausdorff(gt_sets.at(m.gt_id), pred_sets.at(m.pred_id)));
    }
    results[i] = std::move(r);
  });

  MetricsReport report;
  report.class_names = gt.manifest.class_names;
  const int num_classes = gt.manifest.num_classes;

  EvalCounts counts;
  std::map<core::ClassId, std::vector<double>> iou_values, hd_values;
  std::vector<double> iou_all, hd_all;
  for (std::size_t i = 0; i < gt.images.size(); ++i) {
    const core::AnnotatedImage& g = gt.images[i];
    const PredictedImage& p = pred[pred_index.at(g.image_id)];
    const PerImage& r = results[i];
    counts.add(r.ms, g.classes, p.classes);
    report.segmentation.over_seg_count += r.over_seg;
    report.segmentation.under_seg_count += r.under_seg;
    report.segmentation.fp_count += static_cast<std::int64_t>(r.ms.unmatched_pred.size());
    report.segmentation.fn_count += static_cast<std::int64_t>(r.ms.unmatched_gt.size());
    for (const auto& [cls, v] : r.iou_by_class) {
      iou_values[cls].push_back(v);
      iou_all.push_back(v);
    }
    for (const auto& [cls, v] : r.hd_by_class) {
      hd_values[cls].push_back(v);
      hd_all.push_back(v);
    }
    if (breakdowns != nullptr) {
      ImageBreakdown b;
      b.image_id = g.image_id;
      b.match_set = r.ms;
      b.over_seg = r.over_seg;
      b.under_seg = r.under_seg;
      b.detection = detection_metrics(r.ms, g.classes, p.classes, num_classes);
      breakdowns->push_back(std::move(b));
    }
  }

  report.detection = detection_metrics(counts, num_classes);
  for (const auto& [cls, values] : iou_values) {
    report.segmentation.iou_per_class[cls] = summarize(values);
  }
  for (const auto& [cls, values] : hd_values) {
    report.segmentation.hd_per_class[cls] = summarize(values);
  }
  report.segmentation.iou_overall = summarize(iou_all);
  report.segmentation.hd_overall = summarize(hd_all);
  report.tables = build_confusion(counts, num_classes);
  report.classification = classification_metrics(report.tables);
  return report;
}

}  // namespace snowbench::eval
