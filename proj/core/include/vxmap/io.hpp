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

#ifndef VXMAP_IO_HPP_
#define VXMAP_IO_HPP_

#include <string>
#include <vector>

#include "vxmap/frame.hpp"
#include "vxmap/map_state.hpp"

namespace vxmap {

/// Sensor-frame log, magic "VXPCLOG1", then per frame:
///   stamp f64 LE, origin 3 x f64 LE, point_count u32 LE, points 3 x f32 LE.
/// Points are stored at sensor precision (f32), origins at pose precision.
void writeFrameLog(const std::string& path, const std::vector<SensorFrame>& frames);

struct FrameLogResult {
  std::vector<SensorFrame> frames;
  size_t dropped_nan_points = 0;  // non-finite points skipped while reading
};

/// Reads a whole log. Throws std::runtime_error naming the byte offset on
/// magic mismatch and the frame index on truncation.
FrameLogResult readFrameLog(const std::string& path);

enum class PlyMode { kOccupied, kInflated };

/// ASCII PLY of voxel centers. Occupied mode emits records with state Occ;
/// inflated mode emits records with n_i > 0. Returns the vertex count.
size_t exportPly(const MapState& map, const std::string& path, PlyMode mode);

}  // namespace vxmap

#endif  // VXMAP_IO_HPP_
