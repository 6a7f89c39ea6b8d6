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

#ifndef SNOWBENCH_GEOMETRY_POLYGON_HPP_
#define SNOWBENCH_GEOMETRY_POLYGON_HPP_

#include <vector>

#include "snowbench/geometry/ellipse.hpp"
#include "snowbench/geometry/pixel_ops.hpp"

namespace snowbench::geom {

// Implicitly closed: the last vertex connects back to the first.
struct Polygon {
  std::vector<Point> vertices;
};

// n vertices at uniformly spaced parametric angles, counterclockwise,
// starting at the major-axis endpoint. n must be >= 8.
Polygon sample_ellipse(const EllipseParams& e, int n);

// Recursive farthest-point simplification of an open polyline. A vertex
// survives only while its distance to the current chord (as a segment)
// is strictly greater than epsilon, so exactly-collinear points vanish
// even at epsilon 0. Endpoints are always retained. Output vertices are
// a subsequence of the input.
std::vector<Point> douglas_peucker(const std::vector<Point>& points, double epsilon);

// Closed-curve variant: splits the ring at the two mutually farthest
// vertices (ties by smallest index pair), simplifies both arcs, and
// rejoins them. Inputs of three or fewer vertices pass through unchanged.
std::vector<Point> douglas_peucker_closed(const std::vector<Point>& points, double epsilon);

// Pixels (x, y) with x in [0,width), y in [0,height) whose sample point
// (x, y) lies inside the polygon by the even-odd rule. Points exactly on
// an edge follow the top-left fill convention: left/top edges are inside,
// right/bottom edges are outside. Polygons with fewer than 3 vertices
// rasterize to nothing.
PixelSet rasterize_polygon(const Polygon& p, std::uint32_t width, std::uint32_t height);

}  // namespace snowbench::geom

#endif  // SNOWBENCH_GEOMETRY_POLYGON_HPP_
