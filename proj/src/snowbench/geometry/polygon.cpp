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

#include "snowbench/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snowbench/core/error.hpp"

namespace snowbench::geom {

namespace {

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const double ux = b.x - a.x, uy = b.y - a.y;
  const double len2 = ux * ux + uy * uy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.x - a.x) * ux + (p.y - a.y) * uy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = p.x - (a.x + t * ux);
  const double dy = p.y - (a.y + t * uy);
  return std::sqrt(dx * dx + dy * dy);
}

void simplify_range(const std::vector<Point>& pts, std::size_t first, std::size_t last,
                    double epsilon, std::vector<bool>& keep) {
  if (last <= first + 1) return;
  double max_dist = 0.0;
  std::size_t split = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d = point_segment_distance(pts[i], pts[first], pts[last]);
    if (d > max_dist) {
      max_dist = d;
      split = i;
    }
  }
  if (max_dist > epsilon) {
    keep[split] = true;
    simplify_range(pts, first, split, epsilon, keep);
    simplify_range(pts, split, last, epsilon, keep);
  }
}

}  // namespace

std::vector<Point> douglas_peucker(const std::vector<Point>& points, double epsilon) {
  if (epsilon < 0.0) throw ConfigError("simplification tolerance must be >= 0");
  if (points.size() <= 2) return points;
  std::vector<bool> keep(points.size(), false);
  keep.front() = keep.back() = true;
  simplify_range(points, 0, points.size() - 1, epsilon, keep);
  std::vector<Point> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) out.push_back(points[i]);
  }
  return out;
}

std::vector<Point> douglas_peucker_closed(const std::vector<Point>& points, double epsilon) {
  if (epsilon < 0.0) throw ConfigError("simplification tolerance must be >= 0");
  const std::size_t n = points.size();
  if (n <= 3) return points;

  // Split the ring at the two mutually farthest vertices; ties resolve to
  // the smallest index pair so reruns pick the same split.
  std::size_t split_i = 0, split_j = 1;
  double best = -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 > best) {
        best = d2;
        split_i = i;
        split_j = j;
      }
    }
  }

  std::vector<Point> arc1(points.begin() + static_cast<std::ptrdiff_t>(split_i),
                          points.begin() + static_cast<std::ptrdiff_t>(split_j) + 1);
  std::vector<Point> arc2(points.begin() + static_cast<std::ptrdiff_t>(split_j), points.end());
  arc2.insert(arc2.end(), points.begin(), points.begin() + static_cast<std::ptrdiff_t>(split_i) + 1);

  const std::vector<Point> s1 = douglas_peucker(arc1, epsilon);
  const std::vector<Point> s2 = douglas_peucker(arc2, epsilon);

  std::vector<Point> out = s1;
  out.insert(out.end(), s2.begin() + 1, s2.end() - 1);
  return out;
}

Polygon sample_ellipse(const EllipseParams& e, int n) {
  if (n < 3) throw ConfigError("an ellipse polygon needs at least 3 vertices");
  const double ct = std::cos(e.theta);
  const double st = std::sin(e.theta);
  Polygon poly;
  poly.vertices.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double u = e.a * std::cos(t);
    const double v = e.b * std::sin(t);
    poly.vertices.push_back({e.cx + u * ct - v * st, e.cy + u * st + v * ct});
  }
  return poly;
}

PixelSet rasterize_polygon(const Polygon& p, std::uint32_t width, std::uint32_t height) {
  const std::vector<Point>& vs = p.vertices;
  if (vs.size() < 3 || width == 0 || height == 0) return {};

  double min_x = vs[0].x, max_x = vs[0].x, min_y = vs[0].y, max_y = vs[0].y;
  for (const Point& v : vs) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const std::int32_t x0 = std::max<std::int32_t>(0, static_cast<std::int32_t>(std::ceil(min_x)));
  const std::int32_t x1 =
      std::min<std::int32_t>(static_cast<std::int32_t>(width) - 1,
                             static_cast<std::int32_t>(std::floor(max_x)));
  const std::int32_t y0 = std::max<std::int32_t>(0, static_cast<std::int32_t>(std::ceil(min_y)));
  const std::int32_t y1 =
      std::min<std::int32_t>(static_cast<std::int32_t>(height) - 1,
                             static_cast<std::int32_t>(std::floor(max_y)));

  PixelSet out;
  const std::size_t n = vs.size();
  for (std::int32_t py = y0; py <= y1; ++py) {
    for (std::int32_t px = x0; px <= x1; ++px) {
      // Even-odd parity along the rightward ray. Edges are half-open in y
      // and crossings strictly right of the sample point count, which
      // realizes the top-left fill rule deterministically.
      bool inside = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vs[i];
        const Point& b = vs[(i + 1) % n];
        if ((a.y > py) == (b.y > py)) continue;
        const double crossing_x = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
        if (crossing_x > px) inside = !inside;
      }
      if (inside) out.push_back({px, py});
    }
  }
  return out;  // scan order is canonical
}

}  // namespace snowbench::geom
