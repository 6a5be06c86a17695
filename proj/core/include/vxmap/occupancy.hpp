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

#ifndef VXMAP_OCCUPANCY_HPP_
#define VXMAP_OCCUPANCY_HPP_

#include <cstdint>

#include "vxmap/map_state.hpp"

namespace vxmap {

/// Occupancy check phase: folds the cycle's hit/miss counters into each
/// touched record's log-odds, clamps, re-derives the state, flags Occ
/// transitions for the inflation pass, records newly occupied keys for
/// export, and schedules known-free voxels for removal. Returns the number
/// of state changes.
uint64_t applyOccupancyCheck(MapState& map);

}  // namespace vxmap

#endif  // VXMAP_OCCUPANCY_HPP_
