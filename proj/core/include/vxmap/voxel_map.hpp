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

#ifndef VXMAP_VOXEL_MAP_HPP_
#define VXMAP_VOXEL_MAP_HPP_

#include <vector>

#include "vxmap/frame.hpp"
#include "vxmap/inflate.hpp"
#include "vxmap/map_state.hpp"
#include "vxmap/retain.hpp"
#include "vxmap/share_frame.hpp"

namespace vxmap {

/// Owner of one map instance; runs the full update cycle
/// (input -> occupancy check -> inflation -> retention) on a single
/// writer context.
class VoxelMap {
 public:
  explicit VoxelMap(MapConfig cfg);

  /// One full sensor update cycle. Throws FrameError on out-of-order input.
  UpdateStats update(const SensorFrame& frame);

  /// One full update cycle driven by received shared data (no raycast,
  /// received keys never re-exported). Throws FrameError on a grid mismatch.
  UpdateStats updateShared(const ShareFrame& share);

  /// Builds this cycle's export delta (sorted, deduplicated) and clears the
  /// newly-occupied set. Sequence numbers increase per VoxelMap instance.
  ShareFrame exportFrame(uint32_t sender_id);

  /// Applies a parameter patch between cycles; rebuilds the inflation
  /// neighborhood when r_obs changes.
  MapConfig setParams(const ParamPatch& patch);

  bool queryOccupied(const Vec3& p) const;
  bool queryInflated(const Vec3& p) const;

  size_t occupiedCount() const { return state_.occSize(); }
  size_t recordCount() const { return state_.infSize(); }
  size_t inflatedCount() const { return state_.inflatedCount(); }

  std::vector<VoxelKey> occupiedKeys() const;

  const MapConfig& cfg() const { return state_.cfg(); }
  const InflationNeighborhood& neighborhood() const { return nbhd_; }

  MapState& state() { return state_; }
  const MapState& state() const { return state_; }

 private:
  UpdateStats runTailPhases(const Vec3& pos_self, UpdateStats stats,
                            double input_ms);

  MapState state_;
  InflationNeighborhood nbhd_;
  uint32_t next_seq_ = 0;
  Vec3 last_origin_;
};

}  // namespace vxmap

#endif  // VXMAP_VOXEL_MAP_HPP_
