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

#ifndef VXMAP_INFLATE_HPP_
#define VXMAP_INFLATE_HPP_

#include <cstdint>
#include <vector>

#include "vxmap/map_state.hpp"

namespace vxmap {

/// Precomputed key offsets within Euclidean radius r_obs of a voxel,
/// center-to-center, zero offset included. Symmetric under negation.
struct InflationNeighborhood {
  std::vector<VoxelKey> offsets;
  double res = 0.0;
  double r_obs = 0.0;

  size_t size() const { return offsets.size(); }
};

InflationNeighborhood buildNeighborhood(double res, double r_obs);

/// Inflation phase: processes every record whose Occ-changed flag is
/// pending and whose center lies within d_inf of the sensor. Records
/// skipped by the gate keep their flag and are retried next cycle.
/// Returns the number of records processed.
uint64_t applyInflation(MapState& map, const Vec3& pos_self,
                        const InflationNeighborhood& nbhd);

/// Planner-facing query: true iff the cell containing `p` is occupied or
/// inflated by an occupied voxel.
bool queryInflatedOccupied(const MapState& map, const Vec3& p);

}  // namespace vxmap

#endif  // VXMAP_INFLATE_HPP_
