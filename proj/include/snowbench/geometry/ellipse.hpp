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

#ifndef SNOWBENCH_GEOMETRY_ELLIPSE_HPP_
#define SNOWBENCH_GEOMETRY_ELLIPSE_HPP_

#include <vector>

#include "snowbench/geometry/pixel_ops.hpp"

namespace snowbench::geom {

struct EllipseParams {
  double cx = 0.0;
  double cy = 0.0;
  double a = 0.0;      // semi-major, a >= b > 0
  double b = 0.0;      // semi-minor
  double theta = 0.0;  // major-axis rotation, radians in [0, pi)
};

/// Direct least-squares ellipse fit: minimizes the algebraic distance of
/// the conic over the points under the constraint 4AC - B^2 = 1, which
/// forces an ellipse (Fitzgibbon-style, solved with the stable 3x3
/// reduction). Points are centered and scale-normalized before solving.
///
/// Throws DegenerateInputError when fewer than min_points points are
/// given or the points do not determine an ellipse (collinear, singular
/// scatter, or no eigenvector satisfying the ellipse constraint).
EllipseParams fit_ellipse(const std::vector<Point>& points, int min_points = 6);

}  // namespace snowbench::geom

#endif  // SNOWBENCH_GEOMETRY_ELLIPSE_HPP_
