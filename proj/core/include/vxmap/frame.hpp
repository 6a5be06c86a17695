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

#ifndef VXMAP_FRAME_HPP_
#define VXMAP_FRAME_HPP_

#include <cstdint>
#include <vector>

#include "vxmap/core.hpp"

namespace vxmap {

/// One sensor update cycle: origin pose plus world-frame returns.
/// Immutable after construction; safe to hand across a queue boundary.
struct SensorFrame {
  double stamp = 0.0;  // seconds, monotonic
  Vec3 origin;         // sensor position, world frame
  std::vector<Vec3> points;
};

struct PhaseTimings {
  double input_ms = 0.0;
  double occupancy_ms = 0.0;
  double inflation_ms = 0.0;
  double retention_ms = 0.0;
  double total_ms = 0.0;
};

struct UpdateStats {
  uint64_t n_points_in = 0;
  uint64_t n_points_dropped_range = 0;
  uint64_t n_points_dropped_nonfinite = 0;
  uint64_t n_new = 0;
  uint64_t n_keep = 0;
  uint64_t n_rays = 0;
  uint64_t ray_voxels_touched = 0;
  uint64_t n_state_changes = 0;
  uint64_t n_inflated_updates = 0;
  uint64_t n_evictions = 0;
  PhaseTimings t_phase;
};

}  // namespace vxmap

#endif  // VXMAP_FRAME_HPP_
