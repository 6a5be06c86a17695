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

#ifndef VXMAP_SHARE_FRAME_HPP_
#define VXMAP_SHARE_FRAME_HPP_

#include <cstdint>
#include <vector>

#include "vxmap/core.hpp"

namespace vxmap {

/// Per-cycle delta of newly occupied voxel keys, the unit of map sharing.
/// Keys are deduplicated and sorted lexicographically (x, then y, then z).
struct ShareFrame {
  uint32_t sender_id = 0;
  uint32_t seq = 0;
  uint64_t stamp_us = 0;
  float res = 0.0f;  // grid resolution, receiver must match exactly
  std::vector<VoxelKey> keys;

  bool operator==(const ShareFrame&) const = default;
};

}  // namespace vxmap

#endif  // VXMAP_SHARE_FRAME_HPP_
