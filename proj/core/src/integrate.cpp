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

#include "vxmap/integrate.hpp"

#include <string>

#include "vxmap/raycast.hpp"

namespace vxmap {
namespace {

// Shared classification step of Algorithm-style input handling. Returns the
// record for `key`, creating or promoting it as needed. The buffer-membership
// guard skips re-classification only; hit accumulation is the caller's job.
VoxelRecord* classifyPoint(MapState& map, const VoxelKey& key, UpdateStats& stats) {
  const MapConfig& cfg = map.cfg();
  VoxelRecord* rec = map.findInf(key);
  if (rec == nullptr) {
    rec = map.makeVoxel(key);
    map.insertOcc(rec);
    map.pushNew(rec);
    rec->log_odds += logitOf(cfg.p_init);
    ++stats.n_new;
  } else if (rec->in_new || rec->in_keep) {
    // Already classified this cycle.
  } else if (!rec->in_occ) {
    // Promotion of an inflated-only record: first occupancy evidence for
    // this cell, so it gets the same prior as a fresh voxel.
    map.insertOcc(rec);
    map.pushNew(rec);
    rec->log_odds += logitOf(cfg.p_init);
    ++stats.n_new;
  } else {
    map.pushKeep(rec);
    ++stats.n_keep;
  }
  rec->last_touch = map.cycle();
  map.markTouched(rec);
  return rec;
}

}  // namespace

void ingestFrame(MapState& map, const SensorFrame& frame, UpdateStats& stats) {
  // Allow a stamp to regress at most one cycle before rejecting the frame.
  if (frame.stamp < map.prevStamp()) {
    throw FrameError("frame stamp " + std::to_string(frame.stamp) +
                     " regresses by more than one cycle (previous " +
                     std::to_string(map.lastStamp()) + ")");
  }
  map.beginCycle(frame.stamp);
  const MapConfig& cfg = map.cfg();

  stats.n_points_in += frame.points.size();

  // Pass 1: classification and hit counting. Retained targets are collected
  // so the miss pass below sees the frame's full set of created voxels,
  // keeping the result independent of point order.
  std::vector<VoxelKey> targets;
  targets.reserve(frame.points.size());
  for (const Vec3& p : frame.points) {
    if (!p.isFinite()) {
      ++stats.n_points_dropped_nonfinite;
      continue;
    }
    if ((p - frame.origin).norm() > cfg.d_in) {
      ++stats.n_points_dropped_range;
      continue;
    }
    const VoxelKey key = posToKey(p, cfg);
    VoxelRecord* rec = classifyPoint(map, key, stats);
    rec->hits += 1;
    targets.push_back(key);
  }

  // Pass 2: raycast miss counting. Misses apply only to voxels already in
  // the occupancy map; free space never instantiates records.
  for (const VoxelKey& target : targets) {
    ++stats.n_rays;
    traverseRay(frame.origin, target, cfg, [&](const VoxelKey& cell) {
      ++stats.ray_voxels_touched;
      if (VoxelRecord* rec = map.findOcc(cell)) {
        rec->misses += 1;
        map.markTouched(rec);
      }
    });
  }
}

void ingestSharedFrame(MapState& map, const ShareFrame& share, UpdateStats& stats) {
  const MapConfig& cfg = map.cfg();
  if (share.res != static_cast<float>(cfg.res)) {
    throw FrameError("shared frame resolution " + std::to_string(share.res) +
                     " does not match map resolution " + std::to_string(cfg.res));
  }
  map.beginCycle(static_cast<double>(share.stamp_us) * 1e-6);

  stats.n_points_in += share.keys.size();
  for (const VoxelKey& key : share.keys) {
    VoxelRecord* rec = classifyPoint(map, key, stats);
    rec->hits += 1;
    rec->from_share = true;
  }
}

}  // namespace vxmap
