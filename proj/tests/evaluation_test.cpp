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

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "snowbench/core/error.hpp"
#include "snowbench/core/rng.hpp"
#include "snowbench/evaluation/matching.hpp"
#include "snowbench/evaluation/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace snowbench;
using testsupport::disk_pixels;
using testsupport::make_image;
using testsupport::make_predicted;
using testsupport::published_cm_counts;
using testsupport::rect_pixels;

namespace {

eval::PredictedImage to_predicted(const core::AnnotatedImage& img) {
  eval::PredictedImage pred;
  pred.image_id = img.image_id;
  pred.map = img.map;
  pred.classes = img.classes;
  return pred;
}

core::Dataset wrap_dataset(std::vector<core::AnnotatedImage> images, core::ClassId num_classes) {
  core::Dataset ds;
  ds.manifest.dataset = "toy";
  ds.manifest.num_classes = num_classes;
  for (core::ClassId c = 1; c <= num_classes; ++c) {
    ds.manifest.class_names.push_back("class" + std::to_string(c));
  }
  for (const core::AnnotatedImage& img : images) {
    ds.manifest.images.push_back({img.image_id, "", {}});
  }
  ds.images = std::move(images);
  return ds;
}

}  // namespace

TEST_CASE("match_instances on identical maps") {
  const core::AnnotatedImage gt = make_image(
      "a", 32, 32,
      {{1, 1, disk_pixels(8, 8, 4.0)}, {2, 2, disk_pixels(20, 10, 5.0)}, {3, 1, rect_pixels(5, 20, 6, 6)}});
  const eval::MatchSet ms = eval::match_instances(gt, to_predicted(gt));
  CHECK(ms.matches.size() == 3);
  for (const eval::Match& m : ms.matches) CHECK(m.iou == 1.0);
  CHECK(ms.unmatched_gt.empty());
  CHECK(ms.unmatched_pred.empty());
  CHECK(ms.rejected_by_centroid.empty());
}

TEST_CASE("match_instances prefers the higher-IoU pair") {
  // One prediction overlapping two adjacent annotations: IoU 80/140
  // against the first, 40/180 against the second; centroid inside the
  // first.
  const core::AnnotatedImage gt = make_image(
      "a", 40, 20, {{1, 1, rect_pixels(0, 0, 10, 10)}, {2, 1, rect_pixels(10, 0, 10, 10)}});
  const eval::PredictedImage pred =
      make_predicted("a", 40, 20, {{5, 1, rect_pixels(2, 0, 12, 10)}});
  const eval::MatchSet ms = eval::match_instances(gt, pred);
  REQUIRE(ms.matches.size() == 1);
  CHECK(ms.matches[0].gt_id == 1);
  CHECK(ms.matches[0].pred_id == 5);
  CHECK(ms.unmatched_gt == std::vector<core::InstanceId>{2});
  CHECK(ms.unmatched_pred.empty());
  CHECK(ms.matches[0].iou == doctest::Approx(80.0 / 140.0).epsilon(1e-12));

  // The brute-force oracle agrees.
  CHECK(testsupport::brute_force_match(gt, pred) == ms);
}

TEST_CASE("match_instances centroid gate rejects hollow overlaps") {
  // L-shaped prediction whose centroid pixel lies outside the annotation.
  std::vector<core::Pixel> l_shape = rect_pixels(0, 0, 1, 10);  // vertical bar
  const std::vector<core::Pixel> foot = rect_pixels(1, 9, 9, 1);
  l_shape.insert(l_shape.end(), foot.begin(), foot.end());

  const core::AnnotatedImage gt = make_image("a", 16, 16, {{1, 1, l_shape}});
  const eval::PredictedImage pred = make_predicted("a", 16, 16, {{1, 1, l_shape}});
  const eval::MatchSet ms = eval::match_instances(gt, pred);
  CHECK(ms.matches.empty());
  REQUIRE(ms.rejected_by_centroid.size() == 1);
  CHECK(ms.rejected_by_centroid[0].iou == 1.0);
  CHECK(ms.unmatched_gt == std::vector<core::InstanceId>{1});
  CHECK(ms.unmatched_pred == std::vector<core::InstanceId>{1});
  CHECK(testsupport::brute_force_match(gt, pred) == ms);
}

TEST_CASE("match_instances rejects mismatched dimensions") {
  const core::AnnotatedImage gt = make_image("a", 8, 8, {{1, 1, {{1, 1}}}});
  const eval::PredictedImage pred = make_predicted("a", 9, 8, {{1, 1, {{1, 1}}}});
  CHECK_THROWS_AS(eval::match_instances(gt, pred), DimensionMismatchError);
}

TEST_CASE("matching is invariant under id relabeling") {
  core::SplitMix64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    auto [gt, pred] = testsupport::random_match_pair(rng);
    const eval::MatchSet before = eval::match_instances(gt, pred);

    // Relabel gt ids by an order-reversing map.
    const std::vector<core::InstanceId> ids = core::instance_ids(gt.map);
    std::map<core::InstanceId, core::InstanceId> perm;
    for (std::size_t i = 0; i < ids.size(); ++i) perm[ids[i]] = 1000 - static_cast<core::InstanceId>(i);
    core::AnnotatedImage relabeled = gt;
    for (core::InstanceId& v : relabeled.map.pixels) {
      if (v != 0) v = perm.at(v);
    }
    relabeled.classes.clear();
    for (const auto& [id, cls] : gt.classes) relabeled.classes[perm.at(id)] = cls;

    const eval::MatchSet after = eval::match_instances(relabeled, pred);
    CHECK(after.matches.size() == before.matches.size());
    std::set<std::pair<core::InstanceId, core::InstanceId>> expected, got;
    for (const eval::Match& m : before.matches) expected.insert({perm.at(m.gt_id), m.pred_id});
    for (const eval::Match& m : after.matches) got.insert({m.gt_id, m.pred_id});
    CHECK(got == expected);
  }
}

TEST_CASE("greedy matcher equals the brute-force rule on random pairs") {
  core::SplitMix64 rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [gt, pred] = testsupport::random_match_pair(rng);
    const eval::MatchSet fast = eval::match_instances(gt, pred);
    const eval::MatchSet slow = testsupport::brute_force_match(gt, pred);
    REQUIRE(fast == slow);
    // Cardinality identities.
    CHECK(fast.matches.size() + fast.unmatched_gt.size() == core::instance_ids(gt.map).size());
    CHECK(fast.matches.size() + fast.unmatched_pred.size() == core::instance_ids(pred.map).size());
  }
}

TEST_CASE("over-segmentation flags split predictions") {
  const core::AnnotatedImage gt = make_image("a", 20, 16, {{1, 1, rect_pixels(0, 0, 10, 10)}});
  const eval::PredictedImage pred = make_predicted(
      "a", 20, 16, {{1, 1, rect_pixels(0, 0, 6, 10)}, {2, 1, rect_pixels(6, 0, 4, 10)}});
  const eval::MatchSet ms = eval::match_instances(gt, pred);
  REQUIRE(ms.matches.size() == 1);
  CHECK(ms.matches[0].pred_id == 1);
  CHECK(ms.unmatched_pred == std::vector<core::InstanceId>{2});

  // Coverage reading: the leftover prediction lies entirely inside the
  // matched annotation. Literal IoU reading stays below 0.5.
  CHECK(eval::find_over_segmentation(ms, gt, pred, eval::OverlapCriterion::kCoverage) ==
        std::vector<core::InstanceId>{2});
  CHECK(eval::find_over_segmentation(ms, gt, pred, eval::OverlapCriterion::kIou).empty());
  CHECK(eval::find_under_segmentation(ms, gt, pred).empty());

  // Flagged predictions remain false positives.
  const eval::DetectionSection d = eval::detection_metrics(ms, gt.classes, pred.classes, 1);
  CHECK(d.pred_total - d.matches == 1);
}

TEST_CASE("under-segmentation flags swallowed annotations") {
  const core::AnnotatedImage gt = make_image(
      "a", 24, 16, {{1, 1, rect_pixels(0, 0, 10, 10)}, {2, 1, rect_pixels(10, 0, 10, 10)}});
  const eval::PredictedImage pred = make_predicted("a", 24, 16, {{7, 1, rect_pixels(0, 0, 20, 10)}});
  const eval::MatchSet ms = eval::match_instances(gt, pred);
  REQUIRE(ms.matches.size() == 1);
  CHECK(ms.matches[0].gt_id == 1);  // tie broken toward the smaller gt id
  CHECK(ms.unmatched_gt == std::vector<core::InstanceId>{2});
  CHECK(eval::find_under_segmentation(ms, gt, pred) == std::vector<core::InstanceId>{2});
  CHECK(eval::find_over_segmentation(ms, gt, pred).empty());

  SUBCASE("all matched leaves both lists empty") {
    const eval::MatchSet perfect = eval::match_instances(gt, to_predicted(gt));
    CHECK(eval::find_over_segmentation(perfect, gt, to_predicted(gt)).empty());
    CHECK(eval::find_under_segmentation(perfect, gt, to_predicted(gt)).empty());
  }
}

TEST_CASE("detection metrics reproduce the published table arithmetic") {
  const eval::EvalCounts counts = published_cm_counts();
  const eval::DetectionSection d = eval::detection_metrics(counts, 3);
  CHECK(d.matches == 10664);
  CHECK(d.gt_total == 11999);
  CHECK(d.pred_total == 12130);
  REQUIRE(d.overall.recall.has_value());
  REQUIRE(d.overall.precision.has_value());
  CHECK(*d.overall.recall == doctest::Approx(88.87).epsilon(3e-4));
  CHECK(*d.overall.precision == doctest::Approx(87.91).epsilon(3e-4));
  REQUIRE(d.overall.f1.has_value());
  const double f1 = 2.0 * *d.overall.precision * *d.overall.recall /
                    (*d.overall.precision + *d.overall.recall);
  CHECK(*d.overall.f1 == doctest::Approx(f1).epsilon(1e-12));
}

TEST_CASE("detection metrics leave 0/0 undefined") {
  eval::EvalCounts counts;
  counts.gt_per_class[1] = 5;  // five annotations, zero predictions
  const eval::DetectionSection d = eval::detection_metrics(counts, 2);
  CHECK(!d.overall.precision.has_value());
  REQUIRE(d.overall.recall.has_value());
  CHECK(*d.overall.recall == 0.0);
  CHECK(!d.per_class.at(2).recall.has_value());  // no class-2 annotations
}

TEST_CASE("segmentation metrics closed forms") {
  const core::AnnotatedImage gt = make_image("a", 20, 12, {{1, 1, rect_pixels(0, 0, 10, 10)}});
  const eval::PredictedImage pred = make_predicted("a", 20, 12, {{1, 1, rect_pixels(5, 0, 10, 10)}});
  const eval::MatchSet ms = eval::match_instances(gt, pred);
  REQUIRE(ms.matches.size() == 1);
  const eval::SegmentationSection s = eval::segmentation_metrics(ms, gt, pred);
  CHECK(*s.iou_overall.mean == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  CHECK(*s.hd_overall.mean == 5.0);
  CHECK(s.fp_count == 0);
  CHECK(s.fn_count == 0);

  SUBCASE("perfect prediction") {
    const eval::MatchSet perfect = eval::match_instances(gt, to_predicted(gt));
    const eval::SegmentationSection ps = eval::segmentation_metrics(perfect, gt, to_predicted(gt));
    CHECK(*ps.iou_overall.mean == 100.0);
    CHECK(*ps.hd_overall.mean == 0.0);
    CHECK(ps.over_seg_count == 0);
    CHECK(ps.under_seg_count == 0);
  }

  SUBCASE("empty match set leaves aggregates undefined") {
    const eval::PredictedImage far = make_predicted("a", 20, 12, {{1, 1, {{19, 11}}}});
    const eval::MatchSet none = eval::match_instances(gt, far);
    CHECK(none.matches.empty());
    const eval::SegmentationSection es = eval::segmentation_metrics(none, gt, far);
    CHECK(!es.iou_overall.mean.has_value());
    CHECK(!es.hd_overall.mean.has_value());
    CHECK(es.fn_count == 1);
    CHECK(es.fp_count == 1);
  }
}

TEST_CASE("confusion tables reproduce the published NCM row") {
  const eval::ConfusionTables tables = eval::build_confusion(published_cm_counts(), 3);

  // Raw row sums and the U column.
  CHECK(tables.raw[1][0] == 874);
  CHECK(tables.raw[1][1] == 22);
  CHECK(tables.raw[1][2] == 4973);
  CHECK(tables.raw[0][2] == 757);
  CHECK(tables.detected(1) == 5054);
  CHECK(tables.detected(2) == 5500);
  CHECK(tables.detected(3) == 110);

  // Published NCM row E: (0.4, 98.4, 1.1, 0.0) within +-0.05.
  CHECK(std::abs(tables.ncm[0][0] - 0.4) <= 0.05);
  CHECK(std::abs(tables.ncm[0][1] - 98.4) <= 0.05);
  CHECK(std::abs(tables.ncm[0][2] - 1.1) <= 0.05);
  CHECK(std::abs(tables.ncm[0][3] - 0.0) <= 0.05);

  for (int r = 0; r < 3; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c <= 3; ++c) row_sum += tables.ncm[r][c];
    CHECK(std::abs(row_sum - 100.0) <= 0.05);
  }
}

TEST_CASE("classification metrics from the published tables") {
  const eval::ConfusionTables tables = eval::build_confusion(published_cm_counts(), 3);
  const eval::ClassificationSection c = eval::classification_metrics(tables);
  REQUIRE(c.balanced_accuracy.has_value());
  CHECK(std::abs(*c.balanced_accuracy - 96.8) <= 0.05);
  CHECK(c.per_class.at(1).nuclei == 5054);
  CHECK(c.per_class.at(2).nuclei == 5500);
  CHECK(c.per_class.at(3).nuclei == 110);
  REQUIRE(c.per_class.at(1).recall.has_value());
  CHECK(*c.per_class.at(1).recall == doctest::Approx(98.3973).epsilon(1e-4));
}

TEST_CASE("balanced precision on the published rounded NCM") {
  // Feeding the published one-decimal NCM through the balanced precision
  // formula: P_E = 98.4 / (98.4 + 2.9 + 1.8) = 95.44.
  eval::ConfusionTables tables;
  tables.num_classes = 3;
  tables.raw.assign(4, std::vector<std::int64_t>(5, 0));
  tables.ncm = {{0.4, 98.4, 1.1, 0.0}, {0.3, 2.9, 96.6, 0.2}, {0.0, 1.8, 2.7, 95.5}};
  tables.row_defined = {true, true, true};
  const eval::ClassificationSection c = eval::classification_metrics(tables);
  REQUIRE(c.per_class.at(1).precision.has_value());
  CHECK(*c.per_class.at(1).precision == doctest::Approx(95.44).epsilon(1e-4));
  CHECK(*c.balanced_accuracy == doctest::Approx((98.4 + 96.6 + 95.5) / 3.0).epsilon(1e-12));
}

TEST_CASE("identity NCM yields perfect classification metrics") {
  eval::EvalCounts counts;
  counts.matched_cm[{1, 1}] = 40;
  counts.matched_cm[{2, 2}] = 25;
  const eval::ConfusionTables tables = eval::build_confusion(counts, 2);
  const eval::ClassificationSection c = eval::classification_metrics(tables);
  CHECK(*c.balanced_accuracy == 100.0);
  CHECK(*c.per_class.at(1).precision == 100.0);
  CHECK(*c.per_class.at(1).recall == 100.0);
  CHECK(*c.per_class.at(2).f1 == 100.0);
}

TEST_CASE("zero-detection classes are excluded from balanced means") {
  eval::EvalCounts counts;
  counts.matched_cm[{1, 1}] = 10;
  counts.unmatched_gt_per_class[2] = 4;  // class 2 never detected
  const eval::ConfusionTables tables = eval::build_confusion(counts, 2);
  CHECK(tables.row_defined == std::vector<bool>{true, false});
  const eval::ClassificationSection c = eval::classification_metrics(tables);
  CHECK(*c.balanced_accuracy == 100.0);  // only the defined row contributes
  CHECK(!c.per_class.at(2).recall.has_value());
  CHECK(c.per_class.at(2).nuclei == 0);
}

TEST_CASE("detection F1 is symmetric under role swap") {
  const eval::EvalCounts counts = published_cm_counts();
  eval::EvalCounts swapped;
  swapped.gt_per_class = counts.pred_per_class;
  swapped.pred_per_class = counts.gt_per_class;
  swapped.matches = counts.matches;
  swapped.matched_gt_per_class = counts.matched_pred_per_class;
  swapped.matched_pred_per_class = counts.matched_gt_per_class;
  const eval::DetectionSection a = eval::detection_metrics(counts, 3);
  const eval::DetectionSection b = eval::detection_metrics(swapped, 3);
  CHECK(*a.overall.precision == doctest::Approx(*b.overall.recall).epsilon(1e-12));
  CHECK(*a.overall.recall == doctest::Approx(*b.overall.precision).epsilon(1e-12));
  CHECK(*a.overall.f1 == doctest::Approx(*b.overall.f1).epsilon(1e-12));
}

TEST_CASE("evaluate_dataset end to end") {
  const core::AnnotatedImage img1 = make_image(
      "i1", 32, 32, {{1, 1, disk_pixels(8, 8, 4.0)}, {2, 2, disk_pixels(22, 8, 5.0)}});
  const core::AnnotatedImage img2 = make_image(
      "i2", 32, 32, {{1, 1, rect_pixels(4, 4, 8, 8)}, {2, 2, rect_pixels(18, 18, 6, 6)}});
  const core::Dataset gt = wrap_dataset({img1, img2}, 2);

  SUBCASE("prediction equal to ground truth is perfect") {
    const std::vector<eval::PredictedImage> pred = {to_predicted(img1), to_predicted(img2)};
    const eval::MetricsReport report = eval::evaluate_dataset(gt, pred, {});
    CHECK(*report.detection.overall.precision == 100.0);
    CHECK(*report.detection.overall.recall == 100.0);
    CHECK(*report.segmentation.iou_overall.mean == 100.0);
    CHECK(*report.segmentation.hd_overall.mean == 0.0);
    CHECK(*report.classification.balanced_accuracy == 100.0);
    CHECK(report.segmentation.fp_count == 0);
    CHECK(report.segmentation.fn_count == 0);
  }

  SUBCASE("one FP and one FN pool into the overall ratios") {
    // img1 prediction misses instance 2; img2 prediction adds a spurious blob.
    const eval::PredictedImage p1 = make_predicted("i1", 32, 32, {{1, 1, disk_pixels(8, 8, 4.0)}});
    core::AnnotatedImage img2_plus = img2;
    for (const core::Pixel& p : rect_pixels(26, 2, 4, 4)) img2_plus.map.at(p.x, p.y) = 9;
    img2_plus.classes[9] = 1;
    const std::vector<eval::PredictedImage> pred = {p1, to_predicted(img2_plus)};

    std::vector<eval::ImageBreakdown> breakdowns;
    const eval::MetricsReport report = eval::evaluate_dataset(gt, pred, {}, &breakdowns);
    const std::int64_t t = report.detection.matches;
    CHECK(t == 3);
    CHECK(*report.detection.overall.precision == doctest::Approx(100.0 * t / (t + 1)).epsilon(1e-12));
    CHECK(*report.detection.overall.recall == doctest::Approx(100.0 * t / (t + 1)).epsilon(1e-12));
    REQUIRE(breakdowns.size() == 2);
    CHECK(breakdowns[0].image_id == "i1");
    CHECK(breakdowns[0].match_set.unmatched_gt.size() == 1);
    CHECK(breakdowns[1].match_set.unmatched_pred.size() == 1);
  }

  SUBCASE("id-set mismatch is an error") {
    const std::vector<eval::PredictedImage> missing = {to_predicted(img1)};
    CHECK_THROWS_AS(eval::evaluate_dataset(gt, missing, {}), IdSetMismatchError);
    std::vector<eval::PredictedImage> extra = {to_predicted(img1), to_predicted(img2)};
    extra.push_back(make_predicted("i3", 32, 32, {{1, 1, {{0, 0}}}}));
    CHECK_THROWS_AS(eval::evaluate_dataset(gt, extra, {}), IdSetMismatchError);
  }

  SUBCASE("NCM is invariant under test-set duplication") {
    const eval::PredictedImage p1 = make_predicted(
        "i1", 32, 32, {{1, 1, disk_pixels(8, 8, 4.0)}, {2, 1, disk_pixels(22, 8, 5.0)}});
    const std::vector<eval::PredictedImage> pred = {p1, to_predicted(img2)};
    const eval::MetricsReport once = eval::evaluate_dataset(gt, pred, {});

    core::AnnotatedImage img1b = img1;
    img1b.image_id = "i1b";
    core::AnnotatedImage img2b = img2;
    img2b.image_id = "i2b";
    const core::Dataset doubled = wrap_dataset({img1, img2, img1b, img2b}, 2);
    eval::PredictedImage p1b = p1;
    p1b.image_id = "i1b";
    eval::PredictedImage p2b = to_predicted(img2);
    p2b.image_id = "i2b";
    const std::vector<eval::PredictedImage> pred2 = {p1, to_predicted(img2), p1b, p2b};
    const eval::MetricsReport twice = eval::evaluate_dataset(doubled, pred2, {});
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c <= 2; ++c) {
        CHECK(once.tables.ncm[r][c] == doctest::Approx(twice.tables.ncm[r][c]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("other-class predictions count only in the overall precision") {
  const core::AnnotatedImage gt = make_image(
      "a", 24, 12, {{1, 1, rect_pixels(0, 0, 6, 6)}, {2, 2, rect_pixels(10, 0, 6, 6)}});
  eval::PredictedImage pred = make_predicted(
      "a", 24, 12, {{1, 1, rect_pixels(0, 0, 6, 6)}, {2, 2, rect_pixels(10, 0, 6, 6)}});
  pred.classes[2] = core::kOtherClass;

  const eval::MatchSet ms = eval::match_instances(gt, pred);
  REQUIRE(ms.matches.size() == 2);
  const eval::DetectionSection d = eval::detection_metrics(ms, gt.classes, pred.classes, 2);
  CHECK(*d.overall.precision == 100.0);
  CHECK(!d.per_class.at(2).precision.has_value());  // nothing predicted as class 2
  REQUIRE(d.per_class.at(2).recall.has_value());
  CHECK(*d.per_class.at(2).recall == 100.0);  // its annotation was still matched

  const eval::ConfusionTables tables = eval::build_confusion(ms, gt.classes, pred.classes, 2);
  CHECK(tables.raw[2][1] == 1);  // true class 2 detected as "other"
  const eval::ClassificationSection c = eval::classification_metrics(tables);
  CHECK(*c.per_class.at(2).recall == 0.0);  // NCM diagonal is 0 for class 2
}
