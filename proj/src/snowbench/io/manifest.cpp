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

#include "snowbench/io/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "snowbench/core/error.hpp"
#include "snowbench/core/parallel.hpp"
#include "snowbench/io/container.hpp"

namespace snowbench::io {

namespace {

using nlohmann::ordered_json;

constexpr int kManifestSchemaVersion = 1;

ordered_json noise_spec_to_json(const core::NoiseSpec& spec) {
  ordered_json j;
  j["detection_rho"] = spec.detection_rho;
  j["classification_rho"] = spec.classification_rho;
  if (spec.segmentation.has_value()) {
    const core::SegmentationNoise& seg = *spec.segmentation;
    ordered_json js;
    js["epsilon_px"] = seg.epsilon_px;
    js["ellipse_scale"] = seg.ellipse_scale;
    js["ellipse_samples"] = seg.ellipse_samples;
    js["merge_enabled"] = seg.merge_enabled;
    js["smooth_radius_px"] = seg.smooth_radius_px;
    j["segmentation"] = js;
  } else {
    j["segmentation"] = nullptr;
  }
  j["seed"] = spec.seed;
  return j;
}

core::NoiseSpec noise_spec_from_json(const ordered_json& j) {
  core::NoiseSpec spec;
  spec.detection_rho = j.at("detection_rho").get<double>();
  spec.classification_rho = j.at("classification_rho").get<double>();
  if (j.contains("segmentation") && !j.at("segmentation").is_null()) {
    const ordered_json& js = j.at("segmentation");
    core::SegmentationNoise seg;
    seg.epsilon_px = js.at("epsilon_px").get<double>();
    seg.ellipse_scale = js.at("ellipse_scale").get<double>();
    seg.ellipse_samples = js.at("ellipse_samples").get<int>();
    seg.merge_enabled = js.at("merge_enabled").get<bool>();
    seg.smooth_radius_px = js.at("smooth_radius_px").get<double>();
    spec.segmentation = seg;
  }
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace

core::DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed manifest " + path.string() + ": " + e.what());
  }

  try {
    if (j.at("schema_version").get<int>() != kManifestSchemaVersion) {
      throw UnsupportedVersionError("unsupported manifest schema version in " + path.string());
    }
    core::DatasetManifest m;
    m.dataset = j.at("dataset").get<std::string>();
    m.num_classes = j.at("num_classes").get<core::ClassId>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    if (m.num_classes < 1) throw ParseError("num_classes must be >= 1 in " + path.string());
    if (m.class_names.size() != m.num_classes) {
      throw ParseError("class_names must list exactly num_classes entries in " + path.string());
    }
    std::set<std::string> seen_ids;
    for (const ordered_json& je : j.at("images")) {
      core::ImageEntry entry;
      entry.image_id = je.at("image_id").get<std::string>();
      entry.container = je.at("container").get<std::string>();
      if (je.contains("metadata")) {
        entry.metadata = je.at("metadata").get<std::map<std::string, std::string>>();
      }
      if (!seen_ids.insert(entry.image_id).second) {
        throw ParseError("duplicate image_id '" + entry.image_id + "' in " + path.string());
      }
      m.images.push_back(std::move(entry));
    }
    if (j.contains("provenance") && !j.at("provenance").is_null()) {
      core::Provenance prov;
      prov.noise_spec = noise_spec_from_json(j.at("provenance").at("noise_spec"));
      prov.parent_manifest = j.at("provenance").value("parent_manifest", std::string{});
      m.provenance = std::move(prov);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed manifest " + path.string() + ": " + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const core::DatasetManifest& manifest) {
  ordered_json j;
  j["schema_version"] = kManifestSchemaVersion;
  j["dataset"] = manifest.dataset;
  j["num_classes"] = manifest.num_classes;
  j["class_names"] = manifest.class_names;
  ordered_json images = ordered_json::array();
  for (const core::ImageEntry& entry : manifest.images) {
    ordered_json je;
    je["image_id"] = entry.image_id;
    je["container"] = entry.container;
    je["metadata"] = entry.metadata;
    images.push_back(je);
  }
  j["images"] = images;
  if (manifest.provenance.has_value()) {
    ordered_json jp;
    jp["noise_spec"] = noise_spec_to_json(manifest.provenance->noise_spec);
    jp["parent_manifest"] = manifest.provenance->parent_manifest;
    j["provenance"] = jp;
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

core::Dataset load_dataset(const std::filesystem::path& manifest_path, bool allow_other,
                           int threads) {
  core::Dataset dataset;
  dataset.manifest = read_manifest(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  dataset.images.resize(dataset.manifest.images.size());
  core::parallel_for(dataset.manifest.images.size(), threads, [&](std::size_t i) {
    const core::ImageEntry& entry = dataset.manifest.images[i];
    const std::filesystem::path container = base / entry.container;
    if (!std::filesystem::exists(container)) {
      throw DataError("container for image '" + entry.image_id +
                      "' does not exist: " + container.string());
    }
    core::AnnotatedImage img = read_container(container, entry.image_id, allow_other);
    img.metadata = entry.metadata;
    if (!allow_other) {
      const std::vector<core::Violation> violations =
          core::validate_image(img, dataset.manifest.num_classes);
      if (!violations.empty()) {
        throw DataError("invalid image '" + entry.image_id + "': " + violations.front().message);
      }
    }
    dataset.images[i] = std::move(img);
  });
  return dataset;
}

std::filesystem::path save_dataset(const std::filesystem::path& dir, const core::Dataset& dataset) {
  std::filesystem::create_directories(dir / "containers");
  core::DatasetManifest manifest = dataset.manifest;
  if (manifest.images.size() != dataset.images.size()) {
    manifest.images.clear();
    for (const core::AnnotatedImage& img : dataset.images) {
      manifest.images.push_back({img.image_id, "", img.metadata});
    }
  }
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const core::AnnotatedImage& img = dataset.images[i];
    if (img.image_id.empty() || img.image_id.find('/') != std::string::npos ||
        img.image_id.find('\\') != std::string::npos) {
      throw DataError("image_id '" + img.image_id + "' is not usable as a file name");
    }
    const std::string rel = "containers/" + img.image_id + ".snwb";
    manifest.images[i].image_id = img.image_id;
    manifest.images[i].container = rel;
    manifest.images[i].metadata = img.metadata;
    write_container(dir / rel, img);
  }
  const std::filesystem::path manifest_path = dir / "manifest.json";
  write_manifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace snowbench::io
