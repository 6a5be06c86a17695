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

#include "vxmap/retain.hpp"

#include <stdexcept>

namespace vxmap {
namespace {

void appendToHistory(MapState& map, VoxelRecord* rec) {
  map.history().push_back(rec);
  rec->hist_slot = std::prev(map.history().end());
}

}  // namespace

uint64_t applyRetention(MapState& map) {
  // New voxels: occupied ones enter the back of the history buffer,
  // known-free ones are scheduled for deletion.
  for (VoxelRecord* rec : map.bufNew()) {
    rec->in_new = false;
    rec->from_share = false;
    if (rec->state == OccState::Occ) {
      appendToHistory(map, rec);
    } else if (rec->state == OccState::Free) {
      map.pushDel(rec);
    }
  }
  // Re-observed voxels: refresh recency by erase-and-reappend.
  for (VoxelRecord* rec : map.bufKeep()) {
    rec->in_keep = false;
    rec->from_share = false;
    if (rec->hist_slot) {
      map.history().erase(*rec->hist_slot);
      rec->hist_slot.reset();
    }
    if (rec->state == OccState::Occ) {
      appendToHistory(map, rec);
    } else if (rec->state == OccState::Free) {
      map.pushDel(rec);
    }
  }
  map.bufNew().clear();
  map.bufKeep().clear();

  // Purge known-free voxels before the limit loop, so they never consume
  // eviction budget.
  for (VoxelRecord* rec : map.bufDel()) {
    rec->in_del = false;
    map.removeFromMap(rec);
  }
  map.bufDel().clear();

  uint64_t evictions = 0;
  while (map.history().size() > map.cfg().n_lim) {
    VoxelRecord* oldest = map.history().front();
    map.removeFromMap(oldest);  // erases its history slot as well
    ++evictions;
  }
  return evictions;
}

MapConfig updateParams(MapState& map, const ParamPatch& patch) {
  MapConfig next = map.cfg();
  if (patch.res && *patch.res != next.res) {
    throw std::invalid_argument("updateParams: res is immutable");
  }
  if (patch.origin && !(*patch.origin == next.origin)) {
    throw std::invalid_argument("updateParams: origin is immutable");
  }
  if (patch.p_init) next.p_init = *patch.p_init;
  if (patch.l_hit) next.l_hit = *patch.l_hit;
  if (patch.l_miss) next.l_miss = *patch.l_miss;
  if (patch.l_min) next.l_min = *patch.l_min;
  if (patch.l_max) next.l_max = *patch.l_max;
  if (patch.l_occ_th) next.l_occ_th = *patch.l_occ_th;
  if (patch.l_free_th) next.l_free_th = *patch.l_free_th;
  if (patch.d_in) next.d_in = *patch.d_in;
  if (patch.d_inf) next.d_inf = *patch.d_inf;
  if (patch.r_obs) next.r_obs = *patch.r_obs;
  if (patch.n_lim) next.n_lim = *patch.n_lim;
  if (patch.ring_capacity) next.ring_capacity = *patch.ring_capacity;
  next.validate();

  const bool radius_changed = patch.changesInflationRadius(map.cfg());
  map.mutableCfg() = next;

  if (radius_changed) {
    // Tear down every applied inflation table, then re-arm all occupied
    // voxels; the next inflation pass rebuilds with the new radius.
    std::vector<VoxelRecord*> inflating;
    for (const auto& [key, rec] : map.infMap()) {
      (void)key;
      if (rec->inflating) inflating.push_back(rec.get());
    }
    for (VoxelRecord* rec : inflating) map.deflate(rec);
    for (const auto& [key, rec] : map.occMap()) {
      (void)key;
      if (rec->state == OccState::Occ) map.arm(rec);
    }
  }
  return next;
}

}  // namespace vxmap
