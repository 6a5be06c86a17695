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

#ifndef VXMAP_MAP_STATE_HPP_
#define VXMAP_MAP_STATE_HPP_

#include <list>
#include <memory>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "vxmap/core.hpp"
#include "vxmap/voxel.hpp"

namespace vxmap {

/// Holding area for the whole map: the occupancy and inflation hash
/// containers, the per-cycle task buffers, and the recency-ordered history
/// buffer. Single-writer; queries are safe only between update cycles.
class MapState {
 public:
  explicit MapState(MapConfig cfg);

  MapState(const MapState&) = delete;
  MapState& operator=(const MapState&) = delete;
  ~MapState();

  const MapConfig& cfg() const { return cfg_; }
  MapConfig& mutableCfg() { return cfg_; }

  // --- record lifecycle -----------------------------------------------

  /// Creates the single record for `key` and registers it in the inflation
  /// map (the owning container). Asserts the key is absent.
  VoxelRecord* makeVoxel(const VoxelKey& key);

  VoxelRecord* findOcc(const VoxelKey& key) const;
  VoxelRecord* findInf(const VoxelKey& key) const;

  /// Idempotent occupancy-map insert/erase; keeps the membership flag in sync.
  void insertOcc(VoxelRecord* rec);
  void eraseOcc(VoxelRecord* rec);

  /// Full removal as triggered by B_del purge or history eviction: tears
  /// down the record's own inflation, detaches it from the history buffer
  /// and the occupancy map, then either destroys it or, when other occupied
  /// voxels still inflate this cell, demotes it to an inflated-only record
  /// with its occupancy evidence reset.
  void removeFromMap(VoxelRecord* rec);

  /// Reverts the record's applied inflation: decrements n_i of every entry
  /// in T_inf, clears back references, and destroys inflated-only records
  /// whose count drops to zero.
  void deflate(VoxelRecord* rec);

  /// Destroys a record outright. The record must hold no references in
  /// either direction (asserted).
  void destroyRecord(VoxelRecord* rec);

  // --- per-cycle bookkeeping ------------------------------------------

  void pushNew(VoxelRecord* rec);
  void pushKeep(VoxelRecord* rec);
  void pushDel(VoxelRecord* rec);
  void markTouched(VoxelRecord* rec);
  void arm(VoxelRecord* rec);
  void disarm(VoxelRecord* rec);

  size_t occSize() const { return occ_map_.size(); }
  size_t infSize() const { return inf_map_.size(); }
  size_t historySize() const { return b_his_.size(); }

  /// Records with n_i > 0 (planner-facing inflated set size).
  size_t inflatedCount() const;

  // Exposed containers; phase implementations drive these directly.
  absl::flat_hash_map<VoxelKey, VoxelRecord*, VoxelKeyHash>& occMap() { return occ_map_; }
  const absl::flat_hash_map<VoxelKey, VoxelRecord*, VoxelKeyHash>& occMap() const { return occ_map_; }
  absl::flat_hash_map<VoxelKey, std::unique_ptr<VoxelRecord>, VoxelKeyHash>& infMap() { return inf_map_; }
  const absl::flat_hash_map<VoxelKey, std::unique_ptr<VoxelRecord>, VoxelKeyHash>& infMap() const { return inf_map_; }

  std::vector<VoxelRecord*>& bufNew() { return b_new_; }
  std::vector<VoxelRecord*>& bufKeep() { return b_keep_; }
  std::vector<VoxelRecord*>& bufDel() { return b_del_; }
  std::list<VoxelRecord*>& history() { return b_his_; }
  const std::list<VoxelRecord*>& history() const { return b_his_; }
  std::vector<VoxelRecord*>& touched() { return touched_; }
  absl::flat_hash_set<VoxelRecord*>& armed() { return armed_; }

  std::vector<VoxelKey>& newlyOcc() { return newly_occ_; }

  uint64_t cycle() const { return cycle_; }
  void beginCycle(double stamp);
  double lastStamp() const { return last_stamp_; }
  double prevStamp() const { return prev_stamp_; }

  /// Exhaustive referential-integrity walk; returns an empty string when
  /// consistent, otherwise a description of the first violation found.
  std::string audit() const;

 private:
  MapConfig cfg_;
  absl::flat_hash_map<VoxelKey, std::unique_ptr<VoxelRecord>, VoxelKeyHash> inf_map_;
  absl::flat_hash_map<VoxelKey, VoxelRecord*, VoxelKeyHash> occ_map_;
  std::vector<VoxelRecord*> b_new_;
  std::vector<VoxelRecord*> b_keep_;
  std::vector<VoxelRecord*> b_del_;
  std::list<VoxelRecord*> b_his_;   // front = oldest
  std::vector<VoxelRecord*> touched_;
  absl::flat_hash_set<VoxelRecord*> armed_;  // occ_changed pending inflation
  std::vector<VoxelKey> newly_occ_;
  uint64_t cycle_ = 0;
  double last_stamp_ = -kUnbounded;
  double prev_stamp_ = -kUnbounded;
};

}  // namespace vxmap

#endif  // VXMAP_MAP_STATE_HPP_
