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

#include "vxmap/occupancy.hpp"

#include <algorithm>

namespace vxmap {

uint64_t applyOccupancyCheck(MapState& map) {
  const MapConfig& cfg = map.cfg();
  uint64_t changes = 0;

  for (VoxelRecord* rec : map.touched()) {
    const OccState prev = rec->state;
    rec->log_odds = std::clamp(
        rec->log_odds + rec->hits * cfg.l_hit + rec->misses * cfg.l_miss,
        cfg.l_min, cfg.l_max);
    rec->hits = 0;
    rec->misses = 0;
    rec->state = stateOf(rec->log_odds, cfg);
    if (rec->state != prev) ++changes;

    // The flag tracks the mismatch between the current Occ-ness and the
    // inflation applied so far, so a transition skipped by the distance
    // gate stays pending until the inflation pass reaches it.
    const bool occ_now = rec->state == OccState::Occ;
    if (occ_now != rec->inflating) {
      map.arm(rec);
    } else {
      map.disarm(rec);
    }

    if (occ_now && prev != OccState::Occ && !rec->from_share) {
      map.newlyOcc().push_back(rec->key);
    }
    if (rec->state == OccState::Free) {
      map.pushDel(rec);
    }
    rec->in_touched = false;
  }
  map.touched().clear();
  return changes;
}

}  // namespace vxmap
