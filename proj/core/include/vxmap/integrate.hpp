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

#ifndef VXMAP_INTEGRATE_HPP_
#define VXMAP_INTEGRATE_HPP_

#include <stdexcept>

#include "vxmap/frame.hpp"
#include "vxmap/map_state.hpp"
#include "vxmap/share_frame.hpp"

namespace vxmap {

/// Thrown when a frame cannot be accepted (out-of-order stamp, or a shared
/// frame with an incompatible grid).
class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input phase of one update cycle: classifies every retained point into
/// b_new or b_keep, accumulates hit counters, then runs the raycast miss
/// pass over all retained points. Leaves the task buffers and the touched
/// set ready for the occupancy check.
void ingestFrame(MapState& map, const SensorFrame& frame, UpdateStats& stats);

/// Input phase for received shared data: every key is treated as a hit at
/// its voxel center, with no range gate and no raycast. Keys turning Occ
/// from this path are excluded from the map's own export delta.
void ingestSharedFrame(MapState& map, const ShareFrame& share, UpdateStats& stats);

}  // namespace vxmap

#endif  // VXMAP_INTEGRATE_HPP_
