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

#include "vxmap/inflate.hpp"

#include <cmath>

namespace vxmap {

InflationNeighborhood buildNeighborhood(double res, double r_obs) {
  InflationNeighborhood n;
  n.res = res;
  n.r_obs = r_obs;
  const int32_t reach = static_cast<int32_t>(std::floor(r_obs / res + 1e-9));
  // Boundary-inclusive with a small relative tolerance so exact ratios such
  // as r_obs/res = 2 are not lost to rounding.
  const double limit = r_obs * r_obs * (1.0 + 1e-12);
  for (int32_t dx = -reach; dx <= reach; ++dx) {
    for (int32_t dy = -reach; dy <= reach; ++dy) {
      for (int32_t dz = -reach; dz <= reach; ++dz) {
        const double d2 =
            static_cast<double>(dx) * dx + static_cast<double>(dy) * dy +
            static_cast<double>(dz) * dz;
        if (d2 * res * res <= limit) n.offsets.push_back({dx, dy, dz});
      }
    }
  }
  return n;
}

namespace {

void inflateRecord(MapState& map, VoxelRecord* rec,
                   const InflationNeighborhood& nbhd) {
  for (const VoxelKey& delta : nbhd.offsets) {
    const VoxelKey key = rec->key + delta;
    VoxelRecord* v = map.findInf(key);
    if (v == nullptr) v = map.makeVoxel(key);  // inflated-only record
    if (rec->inflates.insert(v).second) {
      v->inflation_count += 1;
      v->inflaters.insert(rec);
    }
  }
  rec->inflating = true;
}

}  // namespace

uint64_t applyInflation(MapState& map, const Vec3& pos_self,
                        const InflationNeighborhood& nbhd) {
  const MapConfig& cfg = map.cfg();
  uint64_t processed = 0;

  std::vector<VoxelRecord*> pending(map.armed().begin(), map.armed().end());
  for (VoxelRecord* rec : pending) {
    if (std::isfinite(cfg.d_inf) &&
        !((keyToCenter(rec->key, cfg) - pos_self).norm() < cfg.d_inf)) {
      continue;  // stays armed; retried when the sensor comes closer
    }
    const bool occ_now = rec->state == OccState::Occ;
    if (occ_now && !rec->inflating) {
      inflateRecord(map, rec, nbhd);
    } else if (!occ_now && rec->inflating) {
      map.deflate(rec);
    }
    map.disarm(rec);
    ++processed;
  }
  return processed;
}

bool queryInflatedOccupied(const MapState& map, const Vec3& p) {
  const VoxelRecord* rec = map.findInf(posToKey(p, map.cfg()));
  return rec != nullptr &&
         (rec->inflation_count > 0 || rec->state == OccState::Occ);
}

}  // namespace vxmap
