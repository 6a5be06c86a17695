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

#include <doctest.h>

#include "vxmap/map_state.hpp"

using namespace vxmap;

namespace {

// Manually wires "a inflates b" the way the inflation pass does.
void link(VoxelRecord* a, VoxelRecord* b) {
  if (a->inflates.insert(b).second) {
    b->inflation_count += 1;
    b->inflaters.insert(a);
  }
  a->inflating = true;
}

}  // namespace

TEST_CASE("makeVoxel registers in the inflation map only") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({1, 2, 3});
  REQUIRE(rec != nullptr);
  CHECK(rec->key == VoxelKey{1, 2, 3});
  CHECK(map.infSize() == 1);
  CHECK(map.occSize() == 0);
  CHECK(map.findInf({1, 2, 3}) == rec);
  CHECK(map.findOcc({1, 2, 3}) == nullptr);
  CHECK(map.audit().empty());
}

TEST_CASE("occupancy-map insert and erase are idempotent") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({0, 0, 0});
  map.insertOcc(rec);
  map.insertOcc(rec);
  CHECK(map.occSize() == 1);
  CHECK(rec->in_occ);
  map.eraseOcc(rec);
  map.eraseOcc(rec);
  CHECK(map.occSize() == 0);
  CHECK_FALSE(rec->in_occ);
  CHECK(map.audit().empty());
}

TEST_CASE("occupancy map is always a subset of the inflation map") {
  MapState map(MapConfig{});
  for (int32_t i = 0; i < 20; ++i) {
    VoxelRecord* rec = map.makeVoxel({i, 0, 0});
    if (i % 2 == 0) map.insertOcc(rec);
  }
  CHECK(map.occSize() == 10);
  CHECK(map.infSize() == 20);
  CHECK(map.audit().empty());
}

TEST_CASE("task-buffer pushes are idempotent per cycle") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({0, 0, 0});
  map.pushNew(rec);
  map.pushNew(rec);
  CHECK(map.bufNew().size() == 1);
  map.pushKeep(rec);
  map.pushKeep(rec);
  CHECK(map.bufKeep().size() == 1);
  map.pushDel(rec);
  map.pushDel(rec);
  CHECK(map.bufDel().size() == 1);
  map.markTouched(rec);
  map.markTouched(rec);
  CHECK(map.touched().size() == 1);
}

TEST_CASE("beginCycle rolls the stamps and the cycle counter") {
  MapState map(MapConfig{});
  CHECK(map.cycle() == 0);
  map.beginCycle(1.5);
  CHECK(map.cycle() == 1);
  CHECK(map.lastStamp() == 1.5);
  map.beginCycle(2.0);
  CHECK(map.cycle() == 2);
  CHECK(map.prevStamp() == 1.5);
  CHECK(map.lastStamp() == 2.0);
}

TEST_CASE("deflate reverts counts and destroys orphaned inflated-only records") {
  MapState map(MapConfig{});
  VoxelRecord* occ = map.makeVoxel({0, 0, 0});
  map.insertOcc(occ);
  VoxelRecord* neighbor = map.makeVoxel({0, 0, 1});  // inflated-only
  link(occ, occ);
  link(occ, neighbor);
  CHECK(neighbor->inflation_count == 1);
  CHECK(map.infSize() == 2);

  map.deflate(occ);
  CHECK_FALSE(occ->inflating);
  CHECK(occ->inflates.empty());
  CHECK(occ->inflation_count == 0);
  // The orphaned inflated-only neighbor is gone; occ survives (in occ_map).
  CHECK(map.infSize() == 1);
  CHECK(map.findInf({0, 0, 1}) == nullptr);
  CHECK(map.findInf({0, 0, 0}) == occ);
  CHECK(map.audit().empty());
}

TEST_CASE("removeFromMap destroys a record nothing else inflates") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({5, 5, 5});
  map.insertOcc(rec);
  map.removeFromMap(rec);
  CHECK(map.infSize() == 0);
  CHECK(map.occSize() == 0);
  CHECK(map.audit().empty());
}

TEST_CASE("removeFromMap demotes a record other voxels still inflate") {
  MapState map(MapConfig{});
  VoxelRecord* a = map.makeVoxel({0, 0, 0});
  VoxelRecord* b = map.makeVoxel({0, 0, 1});
  map.insertOcc(a);
  map.insertOcc(b);
  a->state = OccState::Occ;
  b->state = OccState::Occ;
  link(a, b);  // a's inflation covers b

  b->log_odds = 3.0;
  map.removeFromMap(b);
  // b is still referenced by a's inflation table, so it survives as an
  // inflated-only record with its occupancy evidence reset.
  VoxelRecord* demoted = map.findInf({0, 0, 1});
  REQUIRE(demoted == b);
  CHECK_FALSE(demoted->in_occ);
  CHECK(demoted->log_odds == 0.0);
  CHECK(demoted->state == OccState::Unknown);
  CHECK(demoted->inflation_count == 1);
  CHECK(map.occSize() == 1);
  CHECK(map.infSize() == 2);
  CHECK(map.audit().empty());

  // Once a's inflation is reverted the demoted record disappears too.
  map.deflate(a);
  CHECK(map.findInf({0, 0, 1}) == nullptr);
  CHECK(map.infSize() == 1);
  CHECK(map.audit().empty());
}

TEST_CASE("removeFromMap tears down the record's own inflation first") {
  MapState map(MapConfig{});
  VoxelRecord* a = map.makeVoxel({0, 0, 0});
  map.insertOcc(a);
  a->state = OccState::Occ;
  VoxelRecord* n1 = map.makeVoxel({0, 1, 0});
  VoxelRecord* n2 = map.makeVoxel({1, 0, 0});
  link(a, a);
  link(a, n1);
  link(a, n2);
  CHECK(map.infSize() == 3);

  map.removeFromMap(a);
  CHECK(map.infSize() == 0);
  CHECK(map.occSize() == 0);
  CHECK(map.historySize() == 0);
  CHECK(map.audit().empty());
}

TEST_CASE("removeFromMap erases the record's history slot") {
  MapState map(MapConfig{});
  VoxelRecord* a = map.makeVoxel({0, 0, 0});
  VoxelRecord* b = map.makeVoxel({1, 0, 0});
  map.insertOcc(a);
  map.insertOcc(b);
  map.history().push_back(a);
  a->hist_slot = std::prev(map.history().end());
  map.history().push_back(b);
  b->hist_slot = std::prev(map.history().end());

  map.removeFromMap(a);
  CHECK(map.historySize() == 1);
  CHECK(map.history().front() == b);
  CHECK(map.audit().empty());
}

TEST_CASE("arm and disarm maintain the pending set and the flag") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({0, 0, 0});
  map.arm(rec);
  CHECK(rec->occ_changed);
  CHECK(map.armed().count(rec) == 1);
  map.arm(rec);
  CHECK(map.armed().size() == 1);
  map.disarm(rec);
  CHECK_FALSE(rec->occ_changed);
  CHECK(map.armed().empty());
}

TEST_CASE("audit reports referential violations") {
  MapState map(MapConfig{});
  VoxelRecord* rec = map.makeVoxel({0, 0, 0});
  map.insertOcc(rec);
  CHECK(map.audit().empty());
  rec->inflation_count = 7;  // no matching inflater set entries
  CHECK_FALSE(map.audit().empty());
  rec->inflation_count = 0;
  CHECK(map.audit().empty());
}
