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

#include "vxmap/voxel_map.hpp"

#include <algorithm>
#include <chrono>

#include "vxmap/integrate.hpp"
#include "vxmap/occupancy.hpp"

namespace vxmap {
namespace {

class PhaseClock {
 public:
  PhaseClock() : start_(std::chrono::steady_clock::now()) {}
  double lapMs() {
    const auto now = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

VoxelMap::VoxelMap(MapConfig cfg)
    : state_(cfg), nbhd_(buildNeighborhood(cfg.res, cfg.r_obs)) {}

UpdateStats VoxelMap::update(const SensorFrame& frame) {
  PhaseClock clock;
  UpdateStats stats;
  ingestFrame(state_, frame, stats);
  last_origin_ = frame.origin;
  return runTailPhases(frame.origin, stats, clock.lapMs());
}

UpdateStats VoxelMap::updateShared(const ShareFrame& share) {
  PhaseClock clock;
  UpdateStats stats;
  ingestSharedFrame(state_, share, stats);
  return runTailPhases(last_origin_, stats, clock.lapMs());
}

UpdateStats VoxelMap::runTailPhases(const Vec3& pos_self, UpdateStats stats,
                                    double input_ms) {
  PhaseClock clock;
  stats.t_phase.input_ms = input_ms;
  stats.n_state_changes = applyOccupancyCheck(state_);
  stats.t_phase.occupancy_ms = clock.lapMs();
  stats.n_inflated_updates = applyInflation(state_, pos_self, nbhd_);
  stats.t_phase.inflation_ms = clock.lapMs();
  stats.n_evictions = applyRetention(state_);
  stats.t_phase.retention_ms = clock.lapMs();
  stats.t_phase.total_ms = stats.t_phase.input_ms + stats.t_phase.occupancy_ms +
                           stats.t_phase.inflation_ms +
                           stats.t_phase.retention_ms;
  return stats;
}

ShareFrame VoxelMap::exportFrame(uint32_t sender_id) {
  ShareFrame frame;
  frame.sender_id = sender_id;
  frame.seq = next_seq_++;
  frame.stamp_us = state_.lastStamp() > 0.0
                       ? static_cast<uint64_t>(state_.lastStamp() * 1e6)
                       : 0;
  frame.res = static_cast<float>(state_.cfg().res);
  frame.keys = state_.newlyOcc();
  std::sort(frame.keys.begin(), frame.keys.end());
  frame.keys.erase(std::unique(frame.keys.begin(), frame.keys.end()),
                   frame.keys.end());
  state_.newlyOcc().clear();
  return frame;
}

MapConfig VoxelMap::setParams(const ParamPatch& patch) {
  const MapConfig applied = updateParams(state_, patch);
  if (nbhd_.res != applied.res || nbhd_.r_obs != applied.r_obs) {
    nbhd_ = buildNeighborhood(applied.res, applied.r_obs);
  }
  return applied;
}

bool VoxelMap::queryOccupied(const Vec3& p) const {
  const VoxelRecord* rec = state_.findOcc(posToKey(p, state_.cfg()));
  return rec != nullptr && rec->state == OccState::Occ;
}

bool VoxelMap::queryInflated(const Vec3& p) const {
  return queryInflatedOccupied(state_, p);
}

std::vector<VoxelKey> VoxelMap::occupiedKeys() const {
  std::vector<VoxelKey> keys;
  keys.reserve(state_.occSize());
  for (const auto& [key, rec] : state_.occMap()) {
    if (rec->state == OccState::Occ) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace vxmap
