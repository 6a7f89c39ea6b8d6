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

#include "snowbench/geometry/pixel_ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "snowbench/core/error.hpp"

namespace snowbench::geom {

namespace {

// 8-neighborhood in clockwise screen order (y grows downward), starting west.
constexpr int kRing[8][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1},
                             {1, 0},  {1, 1},   {0, 1},  {-1, 1}};

double signed_area2(const std::vector<Pixel>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pixel& a = poly[i];
    const Pixel& b = poly[(i + 1) % n];
    twice += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return twice;
}

}  // namespace

PixelSet make_pixel_set(std::vector<Pixel> pixels) {
  std::sort(pixels.begin(), pixels.end());
  pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
  return pixels;
}

bool pixel_set_contains(const PixelSet& set, Pixel p) {
  return std::binary_search(set.begin(), set.end(), p);
}

PixelSet boundary_pixels(const PixelSet& set) {
  PixelSet out;
  for (const Pixel& p : set) {
    bool on_boundary = false;
    for (const auto& d : kRing) {
      if (!pixel_set_contains(set, {p.x + d[0], p.y + d[1]})) {
        on_boundary = true;
        break;
      }
    }
    if (on_boundary) out.push_back(p);
  }
  return out;  // input order is canonical, subset stays sorted
}

std::vector<PixelSet> connected_components(const PixelSet& set) {
  std::vector<PixelSet> components;
  std::vector<bool> visited(set.size(), false);
  for (std::size_t start = 0; start < set.size(); ++start) {
    if (visited[start]) continue;
    std::vector<Pixel> component;
    std::deque<std::size_t> queue{start};
    visited[start] = true;
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      const Pixel p = set[idx];
      component.push_back(p);
      for (const auto& d : kRing) {
        const Pixel q{p.x + d[0], p.y + d[1]};
        const auto it = std::lower_bound(set.begin(), set.end(), q);
        if (it != set.end() && *it == q) {
          const std::size_t j = static_cast<std::size_t>(it - set.begin());
          if (!visited[j]) {
            visited[j] = true;
            queue.push_back(j);
          }
        }
      }
    }
    components.push_back(make_pixel_set(std::move(component)));
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const PixelSet& a, const PixelSet& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });
  return components;
}

std::vector<Pixel> trace_contour(const PixelSet& set) {
  if (set.empty()) throw EmptyInputError("trace_contour on empty set");
  const std::vector<PixelSet> components = connected_components(set);
  const PixelSet& comp = components.front();
  if (comp.size() == 1) return {comp.front()};

  auto member = [&comp](Pixel p) { return pixel_set_contains(comp, p); };

  // The first pixel in row-major order has a guaranteed non-member to its
  // west, which seeds the Moore walk.
  const Pixel start = comp.front();
  const Pixel start_backtrack{start.x - 1, start.y};

  std::vector<Pixel> contour{start};
  Pixel current = start;
  Pixel backtrack = start_backtrack;
  const std::size_t cap = 4 * comp.size() + 8;

  for (std::size_t step = 0; step < cap; ++step) {
    int k = -1;
    for (int i = 0; i < 8; ++i) {
      if (Pixel{current.x + kRing[i][0], current.y + kRing[i][1]} == backtrack) {
        k = i;
        break;
      }
    }
    Pixel next{};
    Pixel next_backtrack{};
    bool found = false;
    for (int i = 1; i <= 8; ++i) {
      const int idx = (k + i) % 8;
      const Pixel cand{current.x + kRing[idx][0], current.y + kRing[idx][1]};
      if (member(cand)) {
        next = cand;
        const int prev = (k + i - 1) % 8;
        next_backtrack = {current.x + kRing[prev][0], current.y + kRing[prev][1]};
        found = true;
        break;
      }
    }
    if (!found) break;  // isolated pixel, handled above anyway
    if (next == start && next_backtrack == start_backtrack) break;
    contour.push_back(next);
    current = next;
    backtrack = next_backtrack;
  }

  // Canonical counterclockwise orientation (positive shoelace area).
  if (contour.size() >= 3 && signed_area2(contour) < 0.0) {
    std::reverse(contour.begin() + 1, contour.end());
  }
  return contour;
}

Point centroid(const PixelSet& set) {
  if (set.empty()) throw EmptyInputError("centroid of empty set");
  double sx = 0.0, sy = 0.0;
  for (const Pixel& p : set) {
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(set.size());
  return {sx / n, sy / n};
}

PixelSet smooth_mask(const PixelSet& set, double radius) {
  if (radius < 0.0) throw ConfigError("smoothing radius must be >= 0");
  if (set.empty()) return {};
  const int ir = static_cast<int>(std::floor(radius));
  if (ir == 0 && radius * radius < 1.0) return set;  // disk is just the origin

  std::vector<std::pair<int, int>> disk;
  for (int dy = -ir; dy <= ir; ++dy) {
    for (int dx = -ir; dx <= ir; ++dx) {
      if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy <= radius * radius) {
        disk.emplace_back(dx, dy);
      }
    }
  }

  std::int32_t min_x = set.front().x, max_x = set.front().x;
  std::int32_t min_y = set.front().y, max_y = set.front().y;
  for (const Pixel& p : set) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int pad = 2 * ir + 2;
  const std::int32_t ox = min_x - pad;
  const std::int32_t oy = min_y - pad;
  const std::size_t bw = static_cast<std::size_t>(max_x - min_x) + 2 * pad + 1;
  const std::size_t bh = static_cast<std::size_t>(max_y - min_y) + 2 * pad + 1;

  std::vector<char> dilated(bw * bh, 0);
  auto bit = [&](std::int32_t x, std::int32_t y) -> char& {
    return dilated[static_cast<std::size_t>(y - oy) * bw + static_cast<std::size_t>(x - ox)];
  };
  auto in_box = [&](std::int32_t x, std::int32_t y) {
    return x >= ox && y >= oy && x < ox + static_cast<std::int32_t>(bw) &&
           y < oy + static_cast<std::int32_t>(bh);
  };

  for (const Pixel& p : set) {
    for (const auto& [dx, dy] : disk) {
      bit(p.x + dx, p.y + dy) = 1;
    }
  }

  std::vector<Pixel> closed;
  for (std::int32_t y = oy; y < oy + static_cast<std::int32_t>(bh); ++y) {
    for (std::int32_t x = ox; x < ox + static_cast<std::int32_t>(bw); ++x) {
      bool keep = true;
      for (const auto& [dx, dy] : disk) {
        const std::int32_t qx = x + dx, qy = y + dy;
        if (!in_box(qx, qy) || !bit(qx, qy)) {
          keep = false;
          break;
        }
      }
      if (keep) closed.push_back({x, y});
    }
  }
  return closed;  // row-major scan yields canonical order
}

std::size_t shared_border(const InstanceMap& map, InstanceId id_a, InstanceId id_b) {
  bool seen_a = false, seen_b = false;
  std::size_t count = 0;
  const auto w = static_cast<std::int32_t>(map.width);
  const auto h = static_cast<std::int32_t>(map.height);
  for (std::int32_t y = 0; y < h; ++y) {
    for (std::int32_t x = 0; x < w; ++x) {
      const InstanceId v = map.at(x, y);
      if (v == id_a) seen_a = true;
      if (v == id_b) seen_b = true;
      if (v != id_a && v != id_b) continue;
      // Count each unordered 4-adjacent pair once via east/south neighbors.
      for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const std::int32_t qx = x + dx, qy = y + dy;
        if (!map.in_bounds(qx, qy)) continue;
        const InstanceId u = map.at(qx, qy);
        if ((v == id_a && u == id_b) || (v == id_b && u == id_a)) ++count;
      }
    }
  }
  if (!seen_a) throw UnknownInstanceError("unknown instance id " + std::to_string(id_a));
  if (!seen_b) throw UnknownInstanceError("unknown instance id " + std::to_string(id_b));
  return count;
}

std::size_t intersection_size(const PixelSet& a, const PixelSet& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) {
      ++count;
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return count;
}

double iou(const PixelSet& a, const PixelSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double directed_hausdorff(const PixelSet& from, const PixelSet& to) {
  double worst = 0.0;
  for (const Pixel& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Pixel& q : to) {
      const double dx = static_cast<double>(p.x) - q.x;
      const double dy = static_cast<double>(p.y) - q.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        if (best <= worst) break;  // cannot raise the running maximum
      }
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff(const PixelSet& a, const PixelSet& b) {
  if (a.empty() || b.empty()) throw EmptyInputError("hausdorff on empty mask");
  const PixelSet ba = boundary_pixels(a);
  const PixelSet bb = boundary_pixels(b);
  return std::max(directed_hausdorff(ba, bb), directed_hausdorff(bb, ba));
}

}  // namespace snowbench::geom
