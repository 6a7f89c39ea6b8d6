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

#include "snowbench/io/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "snowbench/core/error.hpp"

namespace snowbench::io {

namespace {

std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fmt1(const std::optional<double>& v) { return v.has_value() ? fmt1(*v) : "-"; }

std::string class_label(const eval::MetricsReport& report, core::ClassId cls) {
  if (cls >= 1 && static_cast<std::size_t>(cls) <= report.class_names.size()) {
    return report.class_names[cls - 1];
  }
  return "class" + std::to_string(cls);
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lead(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string render_report_text(const eval::MetricsReport& report) {
  std::ostringstream out;
  const int k = report.tables.num_classes;
  std::size_t name_width = 12;
  for (int c = 1; c <= k; ++c) {
    name_width = std::max(name_width, class_label(report, static_cast<core::ClassId>(c)).size());
  }
  name_width += 2;

  out << "detection\n";
  out << "  " << pad("class", name_width) << lead("precision", 11) << lead("recall", 9)
      << lead("f1", 9) << "\n";
  for (const auto& [cls, stat] : report.detection.per_class) {
    out << "  " << pad(class_label(report, cls), name_width) << lead(fmt1(stat.precision), 11)
        << lead(fmt1(stat.recall), 9) << lead(fmt1(stat.f1), 9) << "\n";
  }
  out << "  " << pad("overall", name_width) << lead(fmt1(report.detection.overall.precision), 11)
      << lead(fmt1(report.detection.overall.recall), 9)
      << lead(fmt1(report.detection.overall.f1), 9) << "\n";
  out << "  matched " << report.detection.matches << " of " << report.detection.gt_total
      << " annotated / " << report.detection.pred_total << " predicted\n";

  out << "\nsegmentation\n";
  out << "  " << pad("class", name_width) << lead("iou", 9) << lead("iou sd", 9) << lead("hd", 9)
      << lead("hd sd", 9) << lead("pairs", 9) << "\n";
  for (int c = 1; c <= k; ++c) {
    const auto cls = static_cast<core::ClassId>(c);
    const auto iou_it = report.segmentation.iou_per_class.find(cls);
    const auto hd_it = report.segmentation.hd_per_class.find(cls);
    const eval::ValueStats iou =
        iou_it == report.segmentation.iou_per_class.end() ? eval::ValueStats{} : iou_it->second;
    const eval::ValueStats hd =
        hd_it == report.segmentation.hd_per_class.end() ? eval::ValueStats{} : hd_it->second;
    out << "  " << pad(class_label(report, cls), name_width) << lead(fmt1(iou.mean), 9)
        << lead(fmt1(iou.stddev), 9) << lead(fmt1(hd.mean), 9) << lead(fmt1(hd.stddev), 9)
        << lead(std::to_string(iou.count), 9) << "\n";
  }
  out << "  " << pad("overall", name_width) << lead(fmt1(report.segmentation.iou_overall.mean), 9)
      << lead(fmt1(report.segmentation.iou_overall.stddev), 9)
      << lead(fmt1(report.segmentation.hd_overall.mean), 9)
      << lead(fmt1(report.segmentation.hd_overall.stddev), 9)
      << lead(std::to_string(report.segmentation.iou_overall.count), 9) << "\n";
  out << "  over-segmented " << report.segmentation.over_seg_count << "  under-segmented "
      << report.segmentation.under_seg_count << "  false positives "
      << report.segmentation.fp_count << "  false negatives " << report.segmentation.fn_count
      << "\n";

  out << "\nclassification\n";
  out << "  " << pad("class", name_width) << lead("nuclei", 9) << lead("precision", 11)
      << lead("recall", 9) << lead("f1", 9) << "\n";
  for (const auto& [cls, stat] : report.classification.per_class) {
    out << "  " << pad(class_label(report, cls), name_width)
        << lead(std::to_string(stat.nuclei), 9) << lead(fmt1(stat.precision), 11)
        << lead(fmt1(stat.recall), 9) << lead(fmt1(stat.f1), 9) << "\n";
  }
  out << "  balanced accuracy " << fmt1(report.classification.balanced_accuracy) << "\n";

  // Confusion-matrix columns are headed by class names; size them to fit.
  std::size_t cm_width = 9;
  for (int c = 1; c <= k; ++c) {
    cm_width = std::max(cm_width, class_label(report, static_cast<core::ClassId>(c)).size() + 2);
  }

  out << "\nraw confusion matrix (rows actual, columns predicted)\n";
  out << "  " << pad("", name_width) << lead("U", cm_width) << lead("other", cm_width);
  for (int c = 1; c <= k; ++c) {
    out << lead(class_label(report, static_cast<core::ClassId>(c)), cm_width);
  }
  out << "\n";
  for (int r = 0; r <= k; ++r) {
    const std::string row_name =
        r == 0 ? "background" : class_label(report, static_cast<core::ClassId>(r));
    out << "  " << pad(row_name, name_width);
    for (int col = 0; col < k + 2; ++col) {
      if (r == 0 && col == 0) {
        out << lead("?", cm_width);  // background x U is not a meaningful count
      } else {
        out << lead(std::to_string(report.tables.raw[static_cast<std::size_t>(r)]
                                                    [static_cast<std::size_t>(col)]),
                    cm_width);
      }
    }
    out << "\n";
  }

  out << "\nnormalized confusion matrix (% of well-detected per true class)\n";
  out << "  " << pad("", name_width) << lead("other", cm_width);
  for (int c = 1; c <= k; ++c) {
    out << lead(class_label(report, static_cast<core::ClassId>(c)), cm_width);
  }
  out << "\n";
  for (int r = 1; r <= k; ++r) {
    out << "  " << pad(class_label(report, static_cast<core::ClassId>(r)), name_width);
    if (report.tables.row_defined[static_cast<std::size_t>(r - 1)]) {
      for (int col = 0; col <= k; ++col) {
        out << lead(fmt1(report.tables.ncm[static_cast<std::size_t>(r - 1)]
                                          [static_cast<std::size_t>(col)]),
                    cm_width);
      }
    } else {
      for (int col = 0; col <= k; ++col) out << lead("-", cm_width);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_report_csv(const eval::MetricsReport& report) {
  std::ostringstream out;
  out << "task,class,metric,value\n";
  auto row = [&out](const std::string& task, const std::string& cls, const std::string& metric,
                    const std::string& value) {
    out << task << "," << cls << "," << metric << "," << value << "\n";
  };

  for (const auto& [cls, stat] : report.detection.per_class) {
    const std::string label = class_label(report, cls);
    row("detection", label, "precision", fmt1(stat.precision));
    row("detection", label, "recall", fmt1(stat.recall));
    row("detection", label, "f1", fmt1(stat.f1));
  }
  row("detection", "overall", "precision", fmt1(report.detection.overall.precision));
  row("detection", "overall", "recall", fmt1(report.detection.overall.recall));
  row("detection", "overall", "f1", fmt1(report.detection.overall.f1));
  row("detection", "overall", "matches", std::to_string(report.detection.matches));
  row("detection", "overall", "annotated", std::to_string(report.detection.gt_total));
  row("detection", "overall", "predicted", std::to_string(report.detection.pred_total));

  const int k = report.tables.num_classes;
  for (int c = 1; c <= k; ++c) {
    const auto cls = static_cast<core::ClassId>(c);
    const std::string label = class_label(report, cls);
    const auto iou_it = report.segmentation.iou_per_class.find(cls);
    const auto hd_it = report.segmentation.hd_per_class.find(cls);
    const eval::ValueStats iou =
        iou_it == report.segmentation.iou_per_class.end() ? eval::ValueStats{} : iou_it->second;
    const eval::ValueStats hd =
        hd_it == report.segmentation.hd_per_class.end() ? eval::ValueStats{} : hd_it->second;
    row("segmentation", label, "iou_mean", fmt1(iou.mean));
    row("segmentation", label, "iou_std", fmt1(iou.stddev));
    row("segmentation", label, "hd_mean", fmt1(hd.mean));
    row("segmentation", label, "hd_std", fmt1(hd.stddev));
  }
  row("segmentation", "overall", "iou_mean", fmt1(report.segmentation.iou_overall.mean));
  row("segmentation", "overall", "iou_std", fmt1(report.segmentation.iou_overall.stddev));
  row("segmentation", "overall", "hd_mean", fmt1(report.segmentation.hd_overall.mean));
  row("segmentation", "overall", "hd_std", fmt1(report.segmentation.hd_overall.stddev));
  row("segmentation", "overall", "over_segmented",
      std::to_string(report.segmentation.over_seg_count));
  row("segmentation", "overall", "under_segmented",
      std::to_string(report.segmentation.under_seg_count));
  row("segmentation", "overall", "false_positives", std::to_string(report.segmentation.fp_count));
  row("segmentation", "overall", "false_negatives", std::to_string(report.segmentation.fn_count));

  for (const auto& [cls, stat] : report.classification.per_class) {
    const std::string label = class_label(report, cls);
    row("classification", label, "nuclei", std::to_string(stat.nuclei));
    row("classification", label, "precision", fmt1(stat.precision));
    row("classification", label, "recall", fmt1(stat.recall));
    row("classification", label, "f1", fmt1(stat.f1));
  }
  row("classification", "overall", "balanced_accuracy",
      fmt1(report.classification.balanced_accuracy));
  return out.str();
}

std::string render_image_breakdown_csv(const std::vector<eval::ImageBreakdown>& breakdowns) {
  std::ostringstream out;
  out << "image_id,task,class,metric,value\n";
  for (const eval::ImageBreakdown& b : breakdowns) {
    out << b.image_id << ",detection,overall,matches," << b.match_set.matches.size() << "\n";
    out << b.image_id << ",detection,overall,false_positives," << b.match_set.unmatched_pred.size()
        << "\n";
    out << b.image_id << ",detection,overall,false_negatives," << b.match_set.unmatched_gt.size()
        << "\n";
    out << b.image_id << ",detection,overall,centroid_rejections,"
        << b.match_set.rejected_by_centroid.size() << "\n";
    out << b.image_id << ",segmentation,overall,over_segmented," << b.over_seg << "\n";
    out << b.image_id << ",segmentation,overall,under_segmented," << b.under_seg << "\n";
    for (const auto& [cls, stat] : b.detection.per_class) {
      const std::string label = "class" + std::to_string(cls);
      out << b.image_id << ",detection," << label << ",precision," << fmt1(stat.precision) << "\n";
      out << b.image_id << ",detection," << label << ",precision_by_true,"
          << fmt1(b.detection.precision_by_true_class.at(cls)) << "\n";
      out << b.image_id << ",detection," << label << ",recall," << fmt1(stat.recall) << "\n";
      out << b.image_id << ",detection," << label << ",f1," << fmt1(stat.f1) << "\n";
    }
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace snowbench::io
