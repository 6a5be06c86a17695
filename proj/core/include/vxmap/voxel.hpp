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

#ifndef VXMAP_VOXEL_HPP_
#define VXMAP_VOXEL_HPP_

#include <cstdint>
#include <list>
#include <optional>

#include <absl/container/flat_hash_set.h>

#include "vxmap/core.hpp"

namespace vxmap {

/// The single per-key voxel object. Every container in MapState refers to
/// the same record by pointer; the inflation map owns its storage.
struct VoxelRecord {
  using HistSlot = std::list<VoxelRecord*>::iterator;

  VoxelKey key;
  double log_odds = 0.0;
  uint32_t hits = 0;    // per-cycle, reset by the occupancy check
  uint32_t misses = 0;  // per-cycle, reset by the occupancy check
  OccState state = OccState::Unknown;

  // True while the occupancy state disagrees with the inflation applied so
  // far. Set by the occupancy check, consumed by the inflation pass; survives
  // cycles in which the distance gate skips this record.
  bool occ_changed = false;
  // True while inflates (T_inf) is applied, i.e. this record's Occ state has
  // been propagated to its neighborhood.
  bool inflating = false;

  bool in_occ = false;
  bool in_inf = false;
  bool in_new = false;
  bool in_keep = false;
  bool in_del = false;
  bool in_touched = false;
  // Hit through the map-sharing path this cycle; such keys are excluded
  // from this map's own export delta.
  bool from_share = false;

  uint32_t inflation_count = 0;  // n_i: occupied records currently inflating this one
  absl::flat_hash_set<VoxelRecord*> inflates;   // T_inf
  absl::flat_hash_set<VoxelRecord*> inflaters;  // back references for teardown

  std::optional<HistSlot> hist_slot;
  uint64_t last_touch = 0;
};

}  // namespace vxmap

#endif  // VXMAP_VOXEL_HPP_
