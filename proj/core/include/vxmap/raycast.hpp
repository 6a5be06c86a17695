// Copyright 2026 The vxmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VXMAP_RAYCAST_HPP_
#define VXMAP_RAYCAST_HPP_

#include <cmath>
#include <cstdlib>

#include "vxmap/core.hpp"

namespace vxmap {

/// Incremental integer grid traversal (Amanatides & Woo style) of the
/// segment from `origin` to the center of `target`. Invokes `visit` for
/// every traversed key strictly before the target, the origin's own cell
/// included; the target cell is never visited. A zero-length segment
/// (origin inside the target cell) visits nothing.
template <typename Visit>
void traverseRay(const Vec3& origin, const VoxelKey& target,
                 const MapConfig& cfg, Visit&& visit) {
  const VoxelKey start = posToKey(origin, cfg);
  if (start == target) return;

  // Work in grid units; the segment runs from s to the target cell center.
  const double sx = (origin.x - cfg.origin.x) / cfg.res;
  const double sy = (origin.y - cfg.origin.y) / cfg.res;
  const double sz = (origin.z - cfg.origin.z) / cfg.res;
  const double dx = (target.x + 0.5) - sx;
  const double dy = (target.y + 0.5) - sy;
  const double dz = (target.z + 0.5) - sz;

  int32_t cx = start.x, cy = start.y, cz = start.z;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const int step_z = dz > 0 ? 1 : (dz < 0 ? -1 : 0);

  // Parametric distance (in fractions of the segment) to the next cell
  // boundary along each axis, and per-cell increments.
  auto first_cross = [](double s, double d, int step, int32_t c) {
    if (step == 0) return kUnbounded;
    const double boundary = step > 0 ? c + 1.0 : c;
    return (boundary - s) / d;
  };
  double t_max_x = first_cross(sx, dx, step_x, cx);
  double t_max_y = first_cross(sy, dy, step_y, cy);
  double t_max_z = first_cross(sz, dz, step_z, cz);
  const double t_delta_x = step_x == 0 ? kUnbounded : std::abs(1.0 / dx);
  const double t_delta_y = step_y == 0 ? kUnbounded : std::abs(1.0 / dy);
  const double t_delta_z = step_z == 0 ? kUnbounded : std::abs(1.0 / dz);

  long remaining = std::labs(static_cast<long>(target.x) - cx) +
                   std::labs(static_cast<long>(target.y) - cy) +
                   std::labs(static_cast<long>(target.z) - cz) + 3;
  while (remaining-- > 0) {
    visit(VoxelKey{cx, cy, cz});
    if (t_max_x <= t_max_y && t_max_x <= t_max_z) {
      cx += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y <= t_max_z) {
      cy += step_y;
      t_max_y += t_delta_y;
    } else {
      cz += step_z;
      t_max_z += t_delta_z;
    }
    if (cx == target.x && cy == target.y && cz == target.z) return;
  }
}

}  // namespace vxmap

#endif  // VXMAP_RAYCAST_HPP_
