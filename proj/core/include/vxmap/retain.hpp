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

#ifndef VXMAP_RETAIN_HPP_
#define VXMAP_RETAIN_HPP_

#include <cstdint>
#include <optional>

#include "vxmap/map_state.hpp"

namespace vxmap {

/// Removal phase: files this cycle's new and re-observed voxels into the
/// recency-ordered history buffer, purges known-free voxels, then evicts
/// from the front of the history until the voxel limit holds. Clears the
/// task buffers for the next cycle. Returns the eviction count.
uint64_t applyRetention(MapState& map);

/// Partial configuration change, applied between update cycles.
/// res and origin are immutable (a change would re-key the whole map).
struct ParamPatch {
  std::optional<double> p_init;
  std::optional<double> l_hit;
  std::optional<double> l_miss;
  std::optional<double> l_min;
  std::optional<double> l_max;
  std::optional<double> l_occ_th;
  std::optional<double> l_free_th;
  std::optional<double> d_in;
  std::optional<double> d_inf;
  std::optional<double> r_obs;
  std::optional<uint64_t> n_lim;
  std::optional<uint32_t> ring_capacity;
  std::optional<double> res;     // rejected
  std::optional<Vec3> origin;    // rejected

  bool changesInflationRadius(const MapConfig& cfg) const {
    return r_obs && *r_obs != cfg.r_obs;
  }
};

/// Validates and applies the patch. On an r_obs change, tears down all
/// applied inflation and re-arms every occupied voxel, so the next
/// inflation pass rebuilds the tables with the new radius (the caller must
/// rebuild its neighborhood). Returns the applied configuration. Throws
/// std::invalid_argument on res/origin changes or inconsistent values.
MapConfig updateParams(MapState& map, const ParamPatch& patch);

}  // namespace vxmap

#endif  // VXMAP_RETAIN_HPP_
