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

#include "snowbench/geometry/ellipse.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "snowbench/core/error.hpp"

namespace snowbench::geom {

namespace {

struct Conic {
  double A, B, C, D, E, F;
};

// Geometric parameters of the conic Ax^2 + Bxy + Cy^2 + Dx + Ey + F = 0,
// which must be an ellipse (B^2 - 4AC < 0).
EllipseParams conic_to_params(Conic c) {
  const double disc = c.B * c.B - 4.0 * c.A * c.C;
  if (!(disc < 0.0)) throw DegenerateInputError("conic is not an ellipse");
  // The coefficient vector is only defined up to sign; fix A + C > 0 so
  // the smaller eigenvalue consistently names the major axis.
  if (c.A + c.C < 0.0) {
    c = {-c.A, -c.B, -c.C, -c.D, -c.E, -c.F};
  }

  EllipseParams e;
  e.cx = (2.0 * c.C * c.D - c.B * c.E) / disc;
  e.cy = (2.0 * c.A * c.E - c.B * c.D) / disc;

  // det of the full conic matrix [[A,B/2,D/2],[B/2,C,E/2],[D/2,E/2,F]].
  const double full_det = c.A * (c.C * c.F - c.E * c.E / 4.0) -
                          (c.B / 2.0) * (c.B / 2.0 * c.F - c.E / 2.0 * c.D / 2.0) +
                          (c.D / 2.0) * (c.B / 2.0 * c.E / 2.0 - c.C * c.D / 2.0);
  const double minor_det = -disc / 4.0;  // det [[A,B/2],[B/2,C]] > 0

  const double mean = (c.A + c.C) / 2.0;
  const double spread = std::sqrt((c.A - c.C) * (c.A - c.C) + c.B * c.B) / 2.0;
  const double lam_min = mean - spread;
  const double lam_max = mean + spread;

  const double major_sq = -full_det / (minor_det * lam_min);
  const double minor_sq = -full_det / (minor_det * lam_max);
  if (!(major_sq > 0.0) || !(minor_sq > 0.0) || !std::isfinite(major_sq) ||
      !std::isfinite(minor_sq)) {
    throw DegenerateInputError("degenerate ellipse axes");
  }
  e.a = std::sqrt(major_sq);
  e.b = std::sqrt(minor_sq);

  if (std::abs(c.B) < 1e-12 * (std::abs(c.A) + std::abs(c.C))) {
    e.theta = c.A <= c.C ? 0.0 : std::numbers::pi / 2.0;
  } else {
    // Eigenvector of [[A,B/2],[B/2,C]] for lam_min gives the major axis.
    e.theta = std::atan2(lam_min - c.A, c.B / 2.0);
  }
  e.theta = std::fmod(e.theta, std::numbers::pi);
  if (e.theta < 0.0) e.theta += std::numbers::pi;
  return e;
}

}  // namespace

EllipseParams fit_ellipse(const std::vector<Point>& points, int min_points) {
  const std::size_t n = points.size();
  if (static_cast<int>(n) < min_points) {
    throw DegenerateInputError("ellipse fit needs at least " + std::to_string(min_points) +
                               " points, got " + std::to_string(n));
  }

  // Center and scale-normalize for conditioning.
  double mx = 0.0, my = 0.0;
  for (const Point& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double rms = 0.0;
  for (const Point& p : points) {
    const double dx = p.x - mx, dy = p.y - my;
    rms += dx * dx + dy * dy;
  }
  rms = std::sqrt(rms / static_cast<double>(n));
  if (!(rms > 1e-12)) throw DegenerateInputError("all points coincide");
  const double scale = rms / std::numbers::sqrt2;

  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (points[i].x - mx) / scale;
    const double v = (points[i].y - my) / scale;
    d1(static_cast<Eigen::Index>(i), 0) = u * u;
    d1(static_cast<Eigen::Index>(i), 1) = u * v;
    d1(static_cast<Eigen::Index>(i), 2) = v * v;
    d2(static_cast<Eigen::Index>(i), 0) = u;
    d2(static_cast<Eigen::Index>(i), 1) = v;
    d2(static_cast<Eigen::Index>(i), 2) = 1.0;
  }

  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  if (!lu.isInvertible()) {
    throw DegenerateInputError("points are collinear or otherwise singular");
  }
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m_full = s1 + s2 * t;

  // Apply inv([[0,0,2],[0,-1,0],[2,0,0]]) to impose 4AC - B^2 = 1.
  Eigen::Matrix3d m;
  m.row(0) = m_full.row(2) / 2.0;
  m.row(1) = -m_full.row(1);
  m.row(2) = m_full.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
  if (solver.info() != Eigen::Success) {
    throw DegenerateInputError("eigen decomposition failed");
  }

  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_cond = 0.0;
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> lam = solver.eigenvalues()(i);
    if (std::abs(lam.imag()) > 1e-8 * (1.0 + std::abs(lam.real()))) continue;
    const Eigen::Vector3d v = solver.eigenvectors().col(i).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (cond > best_cond) {
      best_cond = cond;
      best = v;
    }
  }
  if (!(best_cond > 0.0)) {
    throw DegenerateInputError("no eigenvector satisfies the ellipse constraint");
  }

  const Eigen::Vector3d rest = t * best;
  const Conic normalized{best(0), best(1), best(2), rest(0), rest(1), rest(2)};
  EllipseParams e = conic_to_params(normalized);

  // Undo the isotropic normalization: axes and center scale, theta is
  // unchanged.
  e.cx = mx + scale * e.cx;
  e.cy = my + scale * e.cy;
  e.a *= scale;
  e.b *= scale;
  return e;
}

}  // namespace snowbench::geom
