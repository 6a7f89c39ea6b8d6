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

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "snowbench/core/error.hpp"
#include "snowbench/core/rng.hpp"
#include "snowbench/corruption/noise.hpp"
#include "snowbench/io/container.hpp"
#include "snowbench/io/corruption_log.hpp"
#include "snowbench/io/manifest.hpp"
#include "snowbench/io/report.hpp"
#include "snowbench/io/tiling.hpp"
#include "snowbench/io/trace.hpp"
#include "support/fixtures.hpp"

using namespace snowbench;
using testsupport::disk_pixels;
using testsupport::make_image;
using testsupport::rect_pixels;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("snowbench_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

core::AnnotatedImage random_image(core::SplitMix64& rng, const std::string& id) {
  core::AnnotatedImage img;
  img.image_id = id;
  const std::uint32_t w = 16 + static_cast<std::uint32_t>(rng.next_below(20));
  const std::uint32_t h = 16 + static_cast<std::uint32_t>(rng.next_below(20));
  img.map = core::make_instance_map(w, h);
  const std::size_t n = 1 + rng.next_below(6);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto x = static_cast<std::int32_t>(rng.next_below(w - 4));
    const auto y = static_cast<std::int32_t>(rng.next_below(h - 4));
    for (const core::Pixel& p : rect_pixels(x, y, 3, 3)) {
      img.map.at(p.x, p.y) = static_cast<core::InstanceId>(i);
    }
  }
  for (const core::InstanceId id2 : core::instance_ids(img.map)) {
    img.classes[id2] = static_cast<core::ClassId>(1 + rng.next_below(3));
  }
  return img;
}

}  // namespace

TEST_CASE("container round trip is the identity") {
  core::SplitMix64 rng(31);
  TempDir tmp;
  for (int trial = 0; trial < 20; ++trial) {
    const core::AnnotatedImage img = random_image(rng, "img" + std::to_string(trial));
    const fs::path path = tmp.path / (img.image_id + ".snwb");
    io::write_container(path, img);
    core::AnnotatedImage back = io::read_container(path, img.image_id);
    back.metadata = img.metadata;
    CHECK(back == img);
    CHECK(core::validate_image(back, 3).empty());
  }
}

TEST_CASE("container byte layout is pinned") {
  const core::AnnotatedImage img = make_image("x", 2, 1, {{7, 3, {{0, 0}}}});
  const std::vector<std::uint8_t> bytes = io::encode_container(img);
  REQUIRE(bytes.size() == 14 + 6 * 2 + 4);
  CHECK(bytes[0] == 'S');
  CHECK(bytes[1] == 'N');
  CHECK(bytes[2] == 'W');
  CHECK(bytes[3] == 'B');
  CHECK(bytes[4] == 1);  // version u16 LE
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 2);  // width u32 LE
  CHECK(bytes[10] == 1);  // height u32 LE
  CHECK(bytes[14] == 7);  // instance plane pixel (0,0) = id 7
  CHECK(bytes[18] == 0);  // pixel (1,0) = background
  CHECK(bytes[22] == 3);  // class plane pixel (0,0) = class 3, u16 LE
  CHECK(bytes[24] == 0);  // background class
  const std::uint32_t crc = io::crc32(bytes.data(), bytes.size() - 4);
  CHECK(bytes[26] == (crc & 0xFF));
  CHECK(bytes[29] == ((crc >> 24) & 0xFF));
}

TEST_CASE("container detects corruption and inconsistency") {
  const core::AnnotatedImage img =
      make_image("c", 6, 5, {{1, 2, rect_pixels(0, 0, 3, 3)}, {2, 1, rect_pixels(4, 3, 2, 2)}});
  std::vector<std::uint8_t> bytes = io::encode_container(img);

  SUBCASE("flipped byte in the instance plane fails the CRC") {
    bytes[14 + 5] ^= 0x01;
    CHECK_THROWS_AS(io::decode_container(bytes, "c"), CorruptFileError);
  }

  SUBCASE("truncated file") {
    bytes.pop_back();
    CHECK_THROWS_AS(io::decode_container(bytes, "c"), CorruptFileError);
  }

  SUBCASE("unsupported version") {
    bytes[4] = 9;
    const std::uint32_t crc = io::crc32(bytes.data(), bytes.size() - 4);
    for (int i = 0; i < 4; ++i) {
      bytes[bytes.size() - 4 + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((crc >> (8 * i)) & 0xFF);
    }
    CHECK_THROWS_AS(io::decode_container(bytes, "c"), UnsupportedVersionError);
  }

  SUBCASE("class plane disagreeing with the assignment at one pixel") {
    // Pixel (1,0) belongs to instance 1 (class 2); rewrite its class entry
    // to 1 and fix the checksum so only the consistency check can object.
    const std::size_t pixel_count = 6 * 5;
    const std::size_t class_plane = 14 + 4 * pixel_count;
    const std::size_t offset = class_plane + 2 * 1;  // row 0, x = 1
    bytes[offset] = 1;
    bytes[offset + 1] = 0;
    const std::uint32_t crc = io::crc32(bytes.data(), bytes.size() - 4);
    for (int i = 0; i < 4; ++i) {
      bytes[bytes.size() - 4 + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((crc >> (8 * i)) & 0xFF);
    }
    CHECK_THROWS_AS(io::decode_container(bytes, "c"), InconsistentPlanesError);
  }

  SUBCASE("other-class sentinel requires allow_other") {
    eval::PredictedImage pred;
    core::AnnotatedImage with_other = img;
    with_other.classes[2] = core::kOtherClass;
    const std::vector<std::uint8_t> pred_bytes = io::encode_container(with_other);
    CHECK_THROWS_AS(io::decode_container(pred_bytes, "c", false), InconsistentPlanesError);
    const core::AnnotatedImage back = io::decode_container(pred_bytes, "c", true);
    CHECK(back.classes.at(2) == core::kOtherClass);
  }
}

TEST_CASE("manifest round trip and validation") {
  TempDir tmp;
  core::DatasetManifest m;
  m.dataset = "toy";
  m.num_classes = 3;
  m.class_names = {"epithelial", "lymphocyte", "neutrophil"};
  m.images.push_back({"a", "containers/a.snwb", {{"tissue", "lung"}}});
  m.images.push_back({"b", "containers/b.snwb", {}});
  core::NoiseSpec spec;
  spec.detection_rho = 0.4;
  spec.seed = 7;
  spec.segmentation = core::SegmentationNoise{};
  m.provenance = core::Provenance{spec, "parent/manifest.json"};

  const fs::path path = tmp.path / "manifest.json";
  io::write_manifest(path, m);
  const core::DatasetManifest back = io::read_manifest(path);
  CHECK(back == m);

  SUBCASE("writes are byte-stable") {
    std::ifstream first(path);
    const std::string bytes1((std::istreambuf_iterator<char>(first)),
                             std::istreambuf_iterator<char>());
    io::write_manifest(path, m);
    std::ifstream second(path);
    const std::string bytes2((std::istreambuf_iterator<char>(second)),
                             std::istreambuf_iterator<char>());
    CHECK(bytes1 == bytes2);
  }

  SUBCASE("duplicate image ids are rejected") {
    core::DatasetManifest dup = m;
    dup.provenance.reset();
    dup.images.push_back({"a", "containers/c.snwb", {}});
    io::write_manifest(path, dup);
    CHECK_THROWS_AS(io::read_manifest(path), ParseError);
  }
}

TEST_CASE("dataset save and load round trip") {
  TempDir tmp;
  core::SplitMix64 rng(77);
  core::Dataset ds;
  ds.manifest.dataset = "rt";
  ds.manifest.num_classes = 3;
  ds.manifest.class_names = {"a", "b", "c"};
  for (int i = 0; i < 4; ++i) ds.images.push_back(random_image(rng, "img" + std::to_string(i)));
  for (const core::AnnotatedImage& img : ds.images) {
    ds.manifest.images.push_back({img.image_id, "", img.metadata});
  }

  const fs::path manifest_path = io::save_dataset(tmp.path / "out", ds);
  const core::Dataset back = io::load_dataset(manifest_path);
  CHECK(back.images == ds.images);
  CHECK(back.manifest.dataset == ds.manifest.dataset);

  SUBCASE("missing container fails the load") {
    fs::remove(tmp.path / "out" / "containers" / "img2.snwb");
    CHECK_THROWS_AS(io::load_dataset(manifest_path), DataError);
  }
}

TEST_CASE("tile_image origin grids") {
  core::AnnotatedImage big;
  big.image_id = "big";
  big.map = core::make_instance_map(512, 512);

  const io::TileSet t0 = io::tile_image(big, 256, 0);
  REQUIRE(t0.tiles.size() == 4);
  CHECK(t0.tiles[0].origin_x == 0);
  CHECK(t0.tiles[1].origin_x == 256);
  CHECK(t0.tiles[2].origin_y == 256);
  CHECK(t0.tiles[3].origin_x == 256);
  CHECK(t0.tiles[3].origin_y == 256);

  const io::TileSet t128 = io::tile_image(big, 256, 128);
  CHECK(t128.tiles.size() == 9);

  core::AnnotatedImage odd;
  odd.image_id = "odd";
  odd.map = core::make_instance_map(300, 300);
  const io::TileSet tc = io::tile_image(odd, 256, 0);
  REQUIRE(tc.tiles.size() == 4);
  CHECK(tc.tiles[0].origin_x == 0);
  CHECK(tc.tiles[1].origin_x == 44);  // clamped, coverage duplicated
  CHECK(tc.tiles[3].origin_y == 44);

  CHECK_THROWS_AS(io::tile_image(big, 256, 256), ConfigError);

  core::AnnotatedImage tiny = make_image("tiny", 20, 12, {{1, 1, rect_pixels(2, 2, 4, 4)}});
  const io::TileSet tt = io::tile_image(tiny, 256, 0);
  REQUIRE(tt.tiles.size() == 1);
  CHECK(tt.tiles[0].image.map.width == 20);
  CHECK(tt.tiles[0].image.map.height == 12);
}

TEST_CASE("tiling clips instances and stitching restores the parent") {
  core::SplitMix64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    core::AnnotatedImage img;
    img.image_id = "p" + std::to_string(trial);
    img.map = core::make_instance_map(70, 50);
    core::InstanceId next = 1;
    for (int i = 0; i < 12; ++i) {
      const auto cx = static_cast<std::int32_t>(rng.next_below(64));
      const auto cy = static_cast<std::int32_t>(rng.next_below(44));
      for (const core::Pixel& p : disk_pixels(cx, cy, 3.0)) {
        if (p.x >= 0 && p.y >= 0 && p.x < 70 && p.y < 50) img.map.at(p.x, p.y) = next;
      }
      ++next;
    }
    for (const core::InstanceId id : core::instance_ids(img.map)) {
      img.classes[id] = static_cast<core::ClassId>(1 + rng.next_below(2));
    }

    // v = 0: pixel-for-pixel identity after remapping.
    const io::TileSet tiles = io::tile_image(img, 32, 0);
    const core::AnnotatedImage stitched = io::stitch_tiles(tiles);
    CHECK(stitched.map == img.map);
    CHECK(stitched.classes == img.classes);

    // Instances are clipped, never dropped: every parent id with pixels in
    // a tile window appears in that tile.
    for (const io::Tile& tile : tiles.tiles) {
      for (const auto& [child, parent] : tile.remap) {
        CHECK(img.classes.at(parent) == tile.image.classes.at(child));
      }
    }

    // v > 0: overlapping regions agree (stitch_tiles throws otherwise).
    const io::TileSet overlapped = io::tile_image(img, 32, 16);
    CHECK(io::stitch_tiles(overlapped).map == img.map);
  }
}

TEST_CASE("sampling weights") {
  const core::AnnotatedImage only_a = make_image("t1", 8, 8, {{1, 1, rect_pixels(0, 0, 2, 2)}});
  const core::AnnotatedImage only_b = make_image("t2", 8, 8, {{1, 2, rect_pixels(0, 0, 2, 2)}});
  core::AnnotatedImage empty;
  empty.image_id = "t3";
  empty.map = core::make_instance_map(8, 8);

  SUBCASE("single class normalizes to 1") {
    const std::vector<double> w = io::sampling_weights({only_a, only_a}, {{1, 90}});
    CHECK(w == std::vector<double>{1.0, 1.0});
  }

  SUBCASE("rare classes dominate 9 to 1") {
    const std::map<core::ClassId, std::uint64_t> counts = {{1, 90}, {2, 10}};
    const std::vector<double> w = io::sampling_weights({only_a, only_b}, counts);
    CHECK(w[1] / w[0] == doctest::Approx(9.0).epsilon(1e-12));

    // Scale invariance in the counts.
    const std::map<core::ClassId, std::uint64_t> doubled = {{1, 180}, {2, 20}};
    CHECK(io::sampling_weights({only_a, only_b}, doubled) == w);
  }

  SUBCASE("empty tiles get the minimum positive weight") {
    const std::map<core::ClassId, std::uint64_t> counts = {{1, 90}, {2, 10}};
    const std::vector<double> w = io::sampling_weights({only_a, only_b, empty}, counts);
    CHECK(w[2] > 0.0);
    CHECK(w[2] == doctest::Approx(w[0]).epsilon(1e-12));  // min positive raw weight
    const double mean = (w[0] + w[1] + w[2]) / 3.0;
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("loss trace files") {
  TempDir tmp;
  const fs::path path = tmp.path / "trace.csv";

  SUBCASE("round trip and comments") {
    std::ofstream out(path);
    out << "# stage,epoch,loss\n";
    out << "1,0,0.9\n1,1,0.85\n\n1,2,0.8\n2,0,0.5\n";
    out.close();
    const std::map<int, stop::LossTrace> traces = io::read_loss_traces(path);
    REQUIRE(traces.size() == 2);
    CHECK(traces.at(1).losses == std::vector<double>{0.9, 0.85, 0.8});
    CHECK(traces.at(2).losses == std::vector<double>{0.5});
  }

  SUBCASE("malformed lines raise ParseError") {
    std::ofstream(path) << "1,0\n";
    CHECK_THROWS_AS(io::read_loss_traces(path), ParseError);
    std::ofstream(path) << "1,0,abc\n";
    CHECK_THROWS_AS(io::read_loss_traces(path), ParseError);
  }

  SUBCASE("non-contiguous epochs raise ParseError") {
    std::ofstream(path) << "1,0,0.9\n1,2,0.8\n";
    CHECK_THROWS_AS(io::read_loss_traces(path), ParseError);
  }

  SUBCASE("end marker stops the reader") {
    std::ofstream(path) << "1,0,0.9\nend\n1,1,0.8\n";
    const std::map<int, stop::LossTrace> traces = io::read_loss_traces(path);
    CHECK(traces.at(1).losses.size() == 1);
  }

  SUBCASE("write_loss_trace round trips") {
    stop::LossTrace t;
    t.stage = 2;
    t.losses = {0.5, 0.25, 0.125};
    io::write_loss_trace(path, t);
    const std::map<int, stop::LossTrace> back = io::read_loss_traces(path);
    CHECK(back.at(2).losses == t.losses);
  }
}

TEST_CASE("corruption log file round trip") {
  TempDir tmp;
  corrupt::CorruptionLog log;
  log.spec.detection_rho = 0.4;
  log.spec.classification_rho = 0.3;
  log.spec.segmentation = core::SegmentationNoise{2.0, 1.0, 64, true, 3.0};
  log.spec.seed = 1234567890123456789ull;
  log.removals = {{"img0", 7, 1}, {"img1", 2, 3}};
  log.distortions = {{"img0", 3, 120, 98, 7, corrupt::DistortFallback::kNone},
                     {"img0", 4, 3, 3, 8, corrupt::DistortFallback::kExtentEllipse}};
  log.merges = {{"img1", 5, 9, 2, 12}};
  log.relabels = {{"img0", 3, 1, 2}};

  const fs::path path = tmp.path / "log.jsonl";
  io::write_corruption_log(path, log);
  const corrupt::CorruptionLog back = io::read_corruption_log(path);
  CHECK(back == log);

  SUBCASE("missing spec record is rejected") {
    std::ofstream(path) << R"({"record":"remove","image":"a","instance":1,"class":1})" << "\n";
    CHECK_THROWS_AS(io::read_corruption_log(path), ParseError);
  }
}

TEST_CASE("report rendering is deterministic and marks undefined cells") {
  const eval::EvalCounts counts = testsupport::published_cm_counts();
  eval::MetricsReport report;
  report.class_names = {"epithelial", "lymphocyte", "neutrophil"};
  report.detection = eval::detection_metrics(counts, 3);
  report.tables = eval::build_confusion(counts, 3);
  report.classification = eval::classification_metrics(report.tables);
  report.segmentation.iou_overall = {80.0, 4.0, 3};
  report.segmentation.hd_overall = {3.7, 1.0, 3};

  const std::string text1 = io::render_report_text(report);
  const std::string text2 = io::render_report_text(report);
  CHECK(text1 == text2);
  CHECK(text1.find("96.8") != std::string::npos);   // balanced accuracy
  CHECK(text1.find("88.9") != std::string::npos);   // overall recall, one decimal
  CHECK(text1.find("?") != std::string::npos);      // background x U cell
  CHECK(text1.find("4973") != std::string::npos);   // raw CM cell

  const std::string csv = io::render_report_csv(report);
  CHECK(csv.find("detection,overall,recall,88.9") != std::string::npos);
  CHECK(csv.find("classification,overall,balanced_accuracy,96.8") != std::string::npos);
  // Per-class segmentation rows exist but carry no values here.
  CHECK(csv.find("segmentation,epithelial,iou_mean,-") != std::string::npos);
}
