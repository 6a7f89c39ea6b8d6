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

#ifndef SNOWBENCH_GEOMETRY_PIXEL_OPS_HPP_
#define SNOWBENCH_GEOMETRY_PIXEL_OPS_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "snowbench/core/types.hpp"

namespace snowbench::geom {

using core::InstanceId;
using core::InstanceMap;
using core::Pixel;
using core::PixelSet;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Sorts and deduplicates into the canonical row-major order.
PixelSet make_pixel_set(std::vector<Pixel> pixels);

bool pixel_set_contains(const PixelSet& set, Pixel p);

// Pixels of `set` that touch the complement: at least one of the 8
// neighbors is not a member.
PixelSet boundary_pixels(const PixelSet& set);

// 8-connected components, largest first; ties broken by smallest first
// pixel in row-major order.
std::vector<PixelSet> connected_components(const PixelSet& set);

// Ordered closed boundary walk (Moore neighbor tracing) of the largest
// 8-connected component, oriented counterclockwise. A single pixel traces
// to itself. Every returned pixel is a member and touches the complement.
std::vector<Pixel> trace_contour(const PixelSet& set);

// Arithmetic mean of the pixel coordinates. Throws EmptyInputError on an
// empty set.
Point centroid(const PixelSet& set);

// Morphological closing (dilate then erode) with the discrete disk of the
// given radius: offsets with dx^2 + dy^2 <= radius^2. Radius 0 is the
// identity. Closing is extensive: output is a superset of the input.
PixelSet smooth_mask(const PixelSet& set, double radius);

// Number of 4-adjacent pixel pairs (p, q) with map[p]=id_a, map[q]=id_b.
// Throws UnknownInstanceError if either id is absent.
std::size_t shared_border(const InstanceMap& map, InstanceId id_a, InstanceId id_b);

// |a and b| / |a or b|; 0 when both sets are empty.
double iou(const PixelSet& a, const PixelSet& b);

// Symmetric Hausdorff distance (Euclidean) between the boundary pixel
// sets of the two masks. Throws EmptyInputError if either set is empty.
double hausdorff(const PixelSet& a, const PixelSet& b);

std::size_t intersection_size(const PixelSet& a, const PixelSet& b);

}  // namespace snowbench::geom

#endif  // SNOWBENCH_GEOMETRY_PIXEL_OPS_HPP_
