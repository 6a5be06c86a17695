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

#include "vxmap/map_state.hpp"

#include <cassert>
#include <sstream>

namespace vxmap {

MapState::MapState(MapConfig cfg) : cfg_(cfg) { cfg_.validate(); }

MapState::~MapState() = default;

VoxelRecord* MapState::makeVoxel(const VoxelKey& key) {
  assert(inf_map_.find(key) == inf_map_.end() && "duplicate voxel creation");
  auto rec = std::make_unique<VoxelRecord>();
  rec->key = key;
  rec->in_inf = true;
  rec->last_touch = cycle_;
  VoxelRecord* raw = rec.get();
  inf_map_.emplace(key, std::move(rec));
  return raw;
}

VoxelRecord* MapState::findOcc(const VoxelKey& key) const {
  auto it = occ_map_.find(key);
  return it == occ_map_.end() ? nullptr : it->second;
}

VoxelRecord* MapState::findInf(const VoxelKey& key) const {
  auto it = inf_map_.find(key);
  return it == inf_map_.end() ? nullptr : it->second.get();
}

void MapState::insertOcc(VoxelRecord* rec) {
  if (rec->in_occ) return;
  occ_map_.emplace(rec->key, rec);
  rec->in_occ = true;
}

void MapState::eraseOcc(VoxelRecord* rec) {
  if (!rec->in_occ) return;
  occ_map_.erase(rec->key);
  rec->in_occ = false;
}

void MapState::deflate(VoxelRecord* rec) {
  if (!rec->inflating) return;
  std::vector<VoxelRecord*> orphans;
  for (VoxelRecord* v : rec->inflates) {
    assert(v->inflation_count > 0 && "inflation count underflow");
    v->inflation_count -= 1;
    v->inflaters.erase(rec);
    if (v != rec && v->inflation_count == 0 && !v->in_occ) orphans.push_back(v);
  }
  rec->inflates.clear();
  rec->inflating = false;
  for (VoxelRecord* v : orphans) destroyRecord(v);
}

void MapState::destroyRecord(VoxelRecord* rec) {
  assert(rec->inflates.empty() && "destroying a record that still inflates others");
  assert(rec->inflaters.empty() && "destroying a record still referenced by inflaters");
  if (rec->hist_slot) {
    b_his_.erase(*rec->hist_slot);
    rec->hist_slot.reset();
  }
  eraseOcc(rec);
  disarm(rec);
  rec->in_new = rec->in_keep = rec->in_del = rec->in_touched = false;
  inf_map_.erase(rec->key);  // frees the record
}

void MapState::removeFromMap(VoxelRecord* rec) {
  deflate(rec);
  if (rec->hist_slot) {
    b_his_.erase(*rec->hist_slot);
    rec->hist_slot.reset();
  }
  eraseOcc(rec);
  disarm(rec);
  rec->in_new = rec->in_keep = rec->in_del = rec->in_touched = false;
  if (rec->inflaters.empty()) {
    destroyRecord(rec);
  } else {
    // Other occupied voxels still inflate this cell: keep it alive as an
    // inflated-only record with its occupancy evidence wiped, so a later
    // observation starts from scratch.
    rec->log_odds = 0.0;
    rec->hits = rec->misses = 0;
    rec->state = OccState::Unknown;
    rec->occ_changed = false;
    rec->from_share = false;
  }
}

void MapState::pushNew(VoxelRecord* rec) {
  if (rec->in_new) return;
  rec->in_new = true;
  b_new_.push_back(rec);
}

void MapState::pushKeep(VoxelRecord* rec) {
  if (rec->in_keep) return;
  rec->in_keep = true;
  b_keep_.push_back(rec);
}

void MapState::pushDel(VoxelRecord* rec) {
  if (rec->in_del) return;
  rec->in_del = true;
  b_del_.push_back(rec);
}

void MapState::markTouched(VoxelRecord* rec) {
  if (rec->in_touched) return;
  rec->in_touched = true;
  touched_.push_back(rec);
}

void MapState::arm(VoxelRecord* rec) {
  rec->occ_changed = true;
  armed_.insert(rec);
}

void MapState::disarm(VoxelRecord* rec) {
  rec->occ_changed = false;
  armed_.erase(rec);
}

size_t MapState::inflatedCount() const {
  size_t n = 0;
  for (const auto& [key, rec] : inf_map_) {
    if (rec->inflation_count > 0) ++n;
  }
  return n;
}

void MapState::beginCycle(double stamp) {
  ++cycle_;
  prev_stamp_ = last_stamp_;
  last_stamp_ = stamp;
  newly_occ_.clear();
}

std::string MapState::audit() const {
  std::ostringstream err;
  auto where = [&](const VoxelKey& k) {
    err << " at key (" << k.x << "," << k.y << "," << k.z << ")";
    return err.str();
  };
  for (const auto& [key, owned] : inf_map_) {
    const VoxelRecord* rec = owned.get();
    if (!(rec->key == key)) return "inf_map key mismatch" + where(key);
    if (!rec->in_inf) return "record missing in_inf flag" + where(key);
    auto occ_it = occ_map_.find(key);
    const bool occ_present = occ_it != occ_map_.end();
    if (occ_present != rec->in_occ) return "in_occ flag out of sync" + where(key);
    if (occ_present && occ_it->second != rec) return "occ_map aliases a different record" + where(key);
    if (rec->inflation_count != rec->inflaters.size())
      return "n_i disagrees with inflater back references" + where(key);
    for (const VoxelRecord* u : rec->inflaters) {
      if (!u->inflates.contains(const_cast<VoxelRecord*>(rec)))
        return "inflater lacks forward T_inf entry" + where(key);
    }
    for (const VoxelRecord* v : rec->inflates) {
      if (!v->inflaters.contains(const_cast<VoxelRecord*>(rec)))
        return "T_inf entry lacks back reference" + where(key);
    }
    if (!rec->inflates.empty() && !rec->inflating)
      return "non-empty T_inf on a non-inflating record" + where(key);
    if (rec->hist_slot && **rec->hist_slot != rec)
      return "hist_slot does not point back to the record" + where(key);
  }
  for (const auto& [key, rec] : occ_map_) {
    if (inf_map_.find(key) == inf_map_.end())
      return "occ_map key missing from inf_map" + where(key);
    (void)rec;
  }
  size_t slots = 0;
  for (const VoxelRecord* rec : b_his_) {
    if (!rec->hist_slot) return "history member without hist_slot" + where(rec->key);
    ++slots;
  }
  size_t with_slot = 0;
  for (const auto& [key, rec] : inf_map_) {
    (void)key;
    if (rec->hist_slot) ++with_slot;
  }
  if (slots != with_slot) return std::string("hist_slot count disagrees with history size");
  return {};
}

}  // namespace vxmap
