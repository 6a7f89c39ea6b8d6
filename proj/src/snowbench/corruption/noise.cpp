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

#include "snowbench/corruption/noise.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <set>

#include "snowbench/core/error.hpp"
#include "snowbench/core/parallel.hpp"
#include "snowbench/core/rng.hpp"
#include "snowbench/geometry/ellipse.hpp"
#include "snowbench/geometry/pixel_ops.hpp"
#include "snowbench/geometry/polygon.hpp"

namespace snowbench::corrupt {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ConfigError("rho must be in [0,1), got " + std::to_string(rho));
  }
}

// (image_id, image index, instance id); ordered by (image_id, instance id).
struct InstanceRef {
  std::string image_id;
  std::size_t image_index = 0;
  core::InstanceId id = 0;
};

// Per-class instance lists over the whole dataset, each sorted by
// (image_id, instance_id) so the seeded shuffle sees a canonical order.
std::map<core::ClassId, std::vector<InstanceRef>> instances_by_class(
    const core::Dataset& dataset) {
  std::map<core::ClassId, std::vector<InstanceRef>> by_class;
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const core::AnnotatedImage& img = dataset.images[i];
    for (const auto& [id, cls] : img.classes) {
      by_class[cls].push_back({img.image_id, i, id});
    }
  }
  for (auto& [cls, refs] : by_class) {
    (void)cls;
    std::sort(refs.begin(), refs.end(), [](const InstanceRef& a, const InstanceRef& b) {
      return a.image_id != b.image_id ? a.image_id < b.image_id : a.id < b.id;
    });
  }
  return by_class;
}

void remove_instance(core::AnnotatedImage& img, core::InstanceId id) {
  for (core::InstanceId& pixel : img.map.pixels) {
    if (pixel == id) pixel = 0;
  }
  img.classes.erase(id);
}

geom::EllipseParams extent_ellipse(const core::PixelSet& pixels) {
  std::int32_t min_x = pixels.front().x, max_x = pixels.front().x;
  std::int32_t min_y = pixels.front().y, max_y = pixels.front().y;
  for (const core::Pixel& p : pixels) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  // Half-pixel margin: pixels are unit squares around their centers.
  const double sx = (max_x - min_x) / 2.0 + 0.5;
  const double sy = (max_y - min_y) / 2.0 + 0.5;
  geom::EllipseParams e;
  e.cx = (min_x + max_x) / 2.0;
  e.cy = (min_y + max_y) / 2.0;
  if (sx >= sy) {
    e.a = sx;
    e.b = sy;
    e.theta = 0.0;
  } else {
    e.a = sy;
    e.b = sx;
    e.theta = std::numbers::pi / 2.0;
  }
  return e;
}

}  // namespace

std::array<std::array<double, 2>, 2> detection_noise_matrix(double rho) {
  check_rho(rho);
  return {{{1.0, rho}, {0.0, 1.0 - rho}}};
}

std::vector<std::vector<double>> classification_noise_matrix(double rho, int num_classes) {
  check_rho(rho);
  if (num_classes < 2) throw ConfigError("classification noise needs at least 2 classes");
  const double off = rho / static_cast<double>(num_classes - 1);
  std::vector<std::vector<double>> q(static_cast<std::size_t>(num_classes),
                                     std::vector<double>(static_cast<std::size_t>(num_classes), off));
  for (int i = 0; i < num_classes; ++i) {
    q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0 - rho;
  }
  return q;
}

std::pair<core::Dataset, CorruptionLog> apply_detection_noise(const core::Dataset& dataset,
                                                              double rho, std::uint64_t seed) {
  check_rho(rho);
  core::Dataset out = dataset;
  CorruptionLog log;
  log.spec.detection_rho = rho;
  log.spec.seed = seed;

  for (auto& [cls, refs] : instances_by_class(dataset)) {
    const std::uint64_t count = core::scaled_count(rho, refs.size());
    core::SplitMix64 rng(core::derive_seed(seed, "detection", cls));
    core::deterministic_shuffle(refs, rng);
    for (std::uint64_t k = 0; k < count; ++k) {
      const InstanceRef& ref = refs[k];
      remove_instance(out.images[ref.image_index], ref.id);
      log.removals.push_back({ref.image_id, ref.id, cls});
    }
  }
  std::sort(log.removals.begin(), log.removals.end(),
            [](const RemovalRecord& a, const RemovalRecord& b) {
              return a.image_id != b.image_id ? a.image_id < b.image_id : a.id < b.id;
            });
  return {std::move(out), std::move(log)};
}

std::pair<core::Dataset, CorruptionLog> apply_classification_noise(const core::Dataset& dataset,
                                                                   double rho, std::uint64_t seed,
                                                                   int num_classes) {
  check_rho(rho);
  if (num_classes < 2) {
    throw ConfigError("classification noise needs at least 2 classes to swap between");
  }
  core::Dataset out = dataset;
  CorruptionLog log;
  log.spec.classification_rho = rho;
  log.spec.seed = seed;

  for (auto& [cls, refs] : instances_by_class(dataset)) {
    const std::uint64_t count = core::scaled_count(rho, refs.size());
    core::SplitMix64 rng(core::derive_seed(seed, "classification", cls));
    core::deterministic_shuffle(refs, rng);
    // Targets are the K-1 other classes in ascending order; one uniform
    // draw per selected instance, taken from the same per-class stream.
    std::vector<core::ClassId> targets;
    for (int c = 1; c <= num_classes; ++c) {
      if (static_cast<core::ClassId>(c) != cls) targets.push_back(static_cast<core::ClassId>(c));
    }
    for (std::uint64_t k = 0; k < count; ++k) {
      const InstanceRef& ref = refs[k];
      const core::ClassId new_cls = targets[rng.next_below(targets.size())];
      out.images[ref.image_index].classes[ref.id] = new_cls;
      log.relabels.push_back({ref.image_id, ref.id, cls, new_cls});
    }
  }
  std::sort(log.relabels.begin(), log.relabels.end(),
            [](const RelabelRecord& a, const RelabelRecord& b) {
              return a.image_id != b.image_id ? a.image_id < b.image_id : a.id < b.id;
            });
  return {std::move(out), std::move(log)};
}

std::pair<core::AnnotatedImage, std::vector<DistortRecord>> distort_contours(
    const core::AnnotatedImage& image, double epsilon_px, double ellipse_scale,
    int ellipse_samples, [[maybe_unused]] std::uint64_t seed) {
  if (epsilon_px < 0.0) throw ConfigError("epsilon must be >= 0");
  if (ellipse_samples < 8) throw ConfigError("ellipse sample count must be >= 8");
  if (!(ellipse_scale > 0.0)) throw ConfigError("ellipse scale must be > 0");

  const std::map<core::InstanceId, core::PixelSet> pixel_sets =
      core::all_instance_pixel_sets(image.map);
  std::vector<core::InstanceId> ids;
  ids.reserve(pixel_sets.size());
  for (const auto& [id, pixels] : pixel_sets) {
    (void)pixels;
    ids.push_back(id);
  }
  const std::uint32_t w = image.map.width;
  const std::uint32_t h = image.map.height;

  std::vector<DistortRecord> records;
  std::vector<core::PixelSet> candidates(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const core::InstanceId id = ids[i];
    if (id == 0xFFFFFFFFu) {
      throw DataError("instance id 0xFFFFFFFF is reserved");
    }
    const core::PixelSet& pixels = pixel_sets.at(id);
    const std::vector<core::Pixel> contour = geom::trace_contour(pixels);

    DistortRecord rec;
    rec.image_id = image.image_id;
    rec.id = id;
    rec.old_pixels = pixels.size();

    std::vector<geom::Point> points;
    points.reserve(contour.size());
    for (const core::Pixel& p : contour) {
      points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    }
    geom::EllipseParams e;
    try {
      e = geom::fit_ellipse(points);
      // Contour pixel centers sit up to a pixel inside the continuous
      // outline; half a pixel on each semi-axis undoes the shrinkage.
      e.a += 0.5;
      e.b += 0.5;
    } catch (const DegenerateInputError&) {
      e = extent_ellipse(pixels);
      rec.fallback = DistortFallback::kExtentEllipse;
    }
    e.a *= ellipse_scale;
    e.b *= ellipse_scale;

    const geom::Polygon sampled = geom::sample_ellipse(e, ellipse_samples);
    const std::vector<geom::Point> simplified =
        geom::douglas_peucker_closed(sampled.vertices, epsilon_px);
    rec.vertices = static_cast<std::uint32_t>(simplified.size());
    candidates[i] = geom::rasterize_polygon(geom::Polygon{simplified}, w, h);
    records.push_back(std::move(rec));
  }

  // Pixel ownership: an instance reclaims its own original pixels when its
  // replacement covers them; originally-background pixels go to their sole
  // claimant; contested pixels stay background; pixels of other surviving
  // instances are never taken.
  core::AnnotatedImage out;
  out.image_id = image.image_id;
  out.classes = image.classes;
  out.metadata = image.metadata;
  out.map = core::make_instance_map(w, h);

  constexpr core::InstanceId kContested = 0xFFFFFFFFu;
  std::vector<core::InstanceId> background_claim(static_cast<std::size_t>(w) * h, 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const core::InstanceId id = ids[i];
    for (const core::Pixel& p : candidates[i]) {
      const std::size_t idx = static_cast<std::size_t>(p.y) * w + static_cast<std::size_t>(p.x);
      const core::InstanceId orig = image.map.pixels[idx];
      if (orig == id) {
        out.map.pixels[idx] = id;
      } else if (orig == 0) {
        core::InstanceId& claim = background_claim[idx];
        claim = claim == 0 ? id : kContested;
      }
    }
  }
  for (std::size_t idx = 0; idx < background_claim.size(); ++idx) {
    const core::InstanceId claim = background_claim[idx];
    if (claim != 0 && claim != kContested) out.map.pixels[idx] = claim;
  }

  // Distortion must not delete instances; an empty replacement keeps the
  // original mask (its pixels are necessarily still free).
  std::map<core::InstanceId, std::uint64_t> new_area;
  for (const core::InstanceId id : out.map.pixels) {
    if (id != 0) ++new_area[id];
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const core::InstanceId id = ids[i];
    if (new_area[id] == 0) {
      for (std::size_t idx = 0; idx < image.map.pixels.size(); ++idx) {
        if (image.map.pixels[idx] == id) out.map.pixels[idx] = id;
      }
      records[i].fallback = DistortFallback::kKeptOriginal;
      records[i].new_pixels = records[i].old_pixels;
    } else {
      records[i].new_pixels = new_area[id];
    }
  }
  return {std::move(out), std::move(records)};
}

std::pair<core::AnnotatedImage, std::vector<MergeRecord>> merge_adjacent(
    const core::AnnotatedImage& image, double smooth_radius_px) {
  if (smooth_radius_px < 0.0) throw ConfigError("smoothing radius must be >= 0");

  struct Candidate {
    std::uint64_t border;
    core::InstanceId a;  // a < b
    core::InstanceId b;
  };

  // Shared 4-borders between same-class pairs, one grid pass.
  std::map<std::pair<core::InstanceId, core::InstanceId>, std::uint64_t> borders;
  const auto w = static_cast<std::int32_t>(image.map.width);
  const auto h = static_cast<std::int32_t>(image.map.height);
  for (std::int32_t y = 0; y < h; ++y) {
    for (std::int32_t x = 0; x < w; ++x) {
      const core::InstanceId v = image.map.at(x, y);
      if (v == 0) continue;
      for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const std::int32_t qx = x + dx, qy = y + dy;
        if (!image.map.in_bounds(qx, qy)) continue;
        const core::InstanceId u = image.map.at(qx, qy);
        if (u == 0 || u == v) continue;
        if (image.classes.at(u) != image.classes.at(v)) continue;
        ++borders[{std::min(u, v), std::max(u, v)}];
      }
    }
  }

  std::vector<Candidate> candidates;
  candidates.reserve(borders.size());
  for (const auto& [pair, border] : borders) {
    candidates.push_back({border, pair.first, pair.second});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
    if (l.border != r.border) return l.border > r.border;
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  });

  core::AnnotatedImage out = image;
  std::vector<MergeRecord> merges;
  std::set<core::InstanceId> used;
  for (const Candidate& cand : candidates) {
    if (used.contains(cand.a) || used.contains(cand.b)) continue;
    used.insert(cand.a);
    used.insert(cand.b);

    const core::InstanceId kept = cand.a;
    const core::InstanceId absorbed = cand.b;
    for (core::InstanceId& pixel : out.map.pixels) {
      if (pixel == absorbed) pixel = kept;
    }
    out.classes.erase(absorbed);

    // Smooth the merged mask; the closing only converts background pixels,
    // so neighbors keep their geometry and total foreground never shrinks.
    const core::PixelSet merged = core::instance_pixel_set(out.map, kept);
    const core::PixelSet closed = geom::smooth_mask(merged, smooth_radius_px);
    for (const core::Pixel& p : closed) {
      if (out.map.in_bounds(p.x, p.y) && out.map.at(p.x, p.y) == 0) {
        out.map.at(p.x, p.y) = kept;
      }
    }
    merges.push_back({image.image_id, kept, absorbed, image.classes.at(kept), cand.border});
  }
  return {std::move(out), std::move(merges)};
}

std::pair<core::Dataset, CorruptionLog> apply_noise_pipeline(const core::Dataset& dataset,
                                                             const core::NoiseSpec& spec,
                                                             int threads) {
  core::validate_noise_spec(spec);
  const int num_classes = dataset.manifest.num_classes;
  if (spec.classification_rho > 0.0 && num_classes < 2) {
    throw ConfigError("classification noise needs at least 2 classes");
  }

  CorruptionLog log;
  log.spec = spec;

  auto [after_detection, detection_log] =
      apply_detection_noise(dataset, spec.detection_rho, spec.seed);
  log.removals = std::move(detection_log.removals);

  core::Dataset current = std::move(after_detection);
  if (spec.segmentation.has_value()) {
    const core::SegmentationNoise& seg = *spec.segmentation;
    std::vector<std::vector<DistortRecord>> distort_records(current.images.size());
    std::vector<std::vector<MergeRecord>> merge_records(current.images.size());
    core::parallel_for(current.images.size(), threads, [&](std::size_t i) {
      auto [distorted, d_records] =
          distort_contours(current.images[i], seg.epsilon_px, seg.ellipse_scale,
                           seg.ellipse_samples, core::derive_seed(spec.seed, "segmentation", i));
      distort_records[i] = std::move(d_records);
      if (seg.merge_enabled) {
        auto [merged, m_records] = merge_adjacent(distorted, seg.smooth_radius_px);
        merge_records[i] = std::move(m_records);
        current.images[i] = std::move(merged);
      } else {
        current.images[i] = std::move(distorted);
      }
    });
    for (std::size_t i = 0; i < current.images.size(); ++i) {
      log.distortions.insert(log.distortions.end(), distort_records[i].begin(),
                             distort_records[i].end());
      log.merges.insert(log.merges.end(), merge_records[i].begin(), merge_records[i].end());
    }
  }

  if (spec.classification_rho > 0.0) {
    auto [after_classification, classification_log] =
        apply_classification_noise(current, spec.classification_rho, spec.seed, num_classes);
    log.relabels = std::move(classification_log.relabels);
    current = std::move(after_classification);
  }
  return {std::move(current), std::move(log)};
}

core::Dataset replay_log(const core::Dataset& clean, const CorruptionLog& log, int threads) {
  core::Dataset out = clean;
  std::map<std::string, std::size_t> index_by_id;
  for (std::size_t i = 0; i < out.images.size(); ++i) {
    index_by_id[out.images[i].image_id] = i;
  }
  auto image_index = [&](const std::string& image_id) {
    const auto it = index_by_id.find(image_id);
    if (it == index_by_id.end()) {
      throw DataError("log references unknown image '" + image_id + "'");
    }
    return it->second;
  };

  for (const RemovalRecord& rec : log.removals) {
    core::AnnotatedImage& img = out.images[image_index(rec.image_id)];
    const auto it = img.classes.find(rec.id);
    if (it == img.classes.end() || it->second != rec.cls) {
      throw DataError("removal record does not match the clean dataset: image '" + rec.image_id +
                      "', instance " + std::to_string(rec.id));
    }
    remove_instance(img, rec.id);
  }

  if (log.spec.segmentation.has_value()) {
    const core::SegmentationNoise& seg = *log.spec.segmentation;
    std::vector<std::vector<DistortRecord>> distort_records(out.images.size());
    std::vector<std::vector<MergeRecord>> merge_records(out.images.size());
    core::parallel_for(out.images.size(), threads, [&](std::size_t i) {
      auto [distorted, d_records] =
          distort_contours(out.images[i], seg.epsilon_px, seg.ellipse_scale, seg.ellipse_samples,
                           core::derive_seed(log.spec.seed, "segmentation", i));
      distort_records[i] = std::move(d_records);
      if (seg.merge_enabled) {
        auto [merged, m_records] = merge_adjacent(distorted, seg.smooth_radius_px);
        merge_records[i] = std::move(m_records);
        out.images[i] = std::move(merged);
      } else {
        out.images[i] = std::move(distorted);
      }
    });
    std::vector<DistortRecord> all_distort;
    std::vector<MergeRecord> all_merge;
    for (std::size_t i = 0; i < out.images.size(); ++i) {
      all_distort.insert(all_distort.end(), distort_records[i].begin(), distort_records[i].end());
      all_merge.insert(all_merge.end(), merge_records[i].begin(), merge_records[i].end());
    }
    if (all_distort != log.distortions || all_merge != log.merges) {
      throw DataError("recomputed segmentation events disagree with the log");
    }
  }

  for (const RelabelRecord& rec : log.relabels) {
    core::AnnotatedImage& img = out.images[image_index(rec.image_id)];
    const auto it = img.classes.find(rec.id);
    if (it == img.classes.end() || it->second != rec.old_cls) {
      throw DataError("relabel record does not match the dataset: image '" + rec.image_id +
                      "', instance " + std::to_string(rec.id));
    }
    it->second = rec.new_cls;
  }
  return out;
}

}  // namespace snowbench::corrupt
