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

#include <deque>
#include <random>
#include <vector>

#include <doctest.h>

#include "vxmap/inflate.hpp"
#include "vxmap/integrate.hpp"
#include "vxmap/occupancy.hpp"
#include "vxmap/retain.hpp"

using namespace vxmap;

namespace {

// One full cycle observing `keys` (sensor co-located with each return, so
// no miss rays disturb other cells).
void observeCycle(MapState& map, const InflationNeighborhood& nbhd,
                  double stamp, const std::vector<VoxelKey>& keys) {
  UpdateStats stats;
  SensorFrame frame;
  frame.stamp = stamp;
  frame.origin = keys.empty() ? Vec3{0, 0, 0} : keyToCenter(keys.front(), map.cfg());
  for (const VoxelKey& k : keys) {
    // A zero-length ray per key: hit without misses. Observing multiple
    // cells per cycle works because the origin only matters for rays.
    frame.points.push_back(keyToCenter(k, map.cfg()));
  }
  // Multi-cell frames would raycast between cells; keep geometry trivial by
  // ingesting per-key single-point frames within one logical cycle instead.
  ingestFrame(map, frame, stats);
  applyOccupancyCheck(map);
  applyInflation(map, frame.origin, nbhd);
  applyRetention(map);
}

std::vector<VoxelKey> historyKeys(const MapState& map) {
  std::vector<VoxelKey> keys;
  for (const VoxelRecord* rec : map.history()) keys.push_back(rec->key);
  return keys;
}

}  // namespace

TEST_CASE("occupied new voxels enter the history back in creation order") {
  MapConfig cfg;
  cfg.r_obs = 0.0;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  observeCycle(map, nbhd, 0.1, {{0, 0, 0}});
  observeCycle(map, nbhd, 0.2, {{1, 0, 0}});
  observeCycle(map, nbhd, 0.3, {{2, 0, 0}});
  CHECK(historyKeys(map) ==
        std::vector<VoxelKey>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  CHECK(map.audit().empty());
}

TEST_CASE("re-observation refreshes recency") {
  MapConfig cfg;
  cfg.r_obs = 0.0;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  observeCycle(map, nbhd, 0.1, {{0, 0, 0}});
  observeCycle(map, nbhd, 0.2, {{1, 0, 0}});
  observeCycle(map, nbhd, 0.3, {{0, 0, 0}});  // refresh the oldest
  CHECK(historyKeys(map) == std::vector<VoxelKey>{{1, 0, 0}, {0, 0, 0}});
  CHECK(map.audit().empty());
}

TEST_CASE("sub-threshold voxels stay out of the history buffer") {
  MapConfig cfg;
  cfg.r_obs = 0.0;
  cfg.l_occ_th = 10.0;  // unreachable in one cycle
  cfg.l_max = 11.0;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  observeCycle(map, nbhd, 0.1, {{0, 0, 0}});
  CHECK(map.occSize() == 1);  // record exists, state Unknown
  CHECK(map.historySize() == 0);
  CHECK(map.audit().empty());
}

TEST_CASE("eviction removes the least recently updated voxel first") {
  MapConfig cfg;
  cfg.r_obs = 0.0;
  cfg.n_lim = 2;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  observeCycle(map, nbhd, 0.1, {{0, 0, 0}});
  observeCycle(map, nbhd, 0.2, {{1, 0, 0}});
  observeCycle(map, nbhd, 0.3, {{2, 0, 0}});  // evicts (0,0,0)
  CHECK(map.historySize() == 2);
  CHECK(map.findOcc({0, 0, 0}) == nullptr);
  CHECK(historyKeys(map) == std::vector<VoxelKey>{{1, 0, 0}, {2, 0, 0}});
  CHECK(map.audit().empty());
}

TEST_CASE("history length never exceeds the limit on a random stream") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int32_t> cell(0, 40);
  for (uint64_t n_lim : {5ull, 20ull}) {
    MapConfig cfg;
    cfg.r_obs = 0.0;
    cfg.n_lim = n_lim;
    MapState map(cfg);
    const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);

    // Reference LRU over keys, updated with the same event stream.
    std::deque<VoxelKey> reference;
    double stamp = 0.0;
    for (int event = 0; event < 400; ++event) {
      stamp += 0.1;
      const VoxelKey key{cell(rng), 0, 0};
      observeCycle(map, nbhd, stamp, {key});
      for (auto it = reference.begin(); it != reference.end(); ++it) {
        if (*it == key) {
          reference.erase(it);
          break;
        }
      }
      reference.push_back(key);
      while (reference.size() > n_lim) reference.pop_front();

      REQUIRE(map.historySize() <= n_lim);
      REQUIRE(historyKeys(map) ==
              std::vector<VoxelKey>(reference.begin(), reference.end()));
    }
    CHECK(map.audit().empty());
  }
}

TEST_CASE("eviction of an inflating voxel reverts its inflation") {
  MapConfig cfg;
  cfg.n_lim = 1;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  observeCycle(map, nbhd, 0.1, {{10, 10, 10}});
  CHECK(map.infSize() == 33);
  observeCycle(map, nbhd, 0.2, {{30, 30, 30}});  // evicts the first voxel
  CHECK(map.historySize() == 1);
  CHECK(map.findOcc({10, 10, 10}) == nullptr);
  // Only the second voxel's neighborhood remains.
  CHECK(map.infSize() == 33);
  CHECK_FALSE(queryInflatedOccupied(map, keyToCenter({10, 10, 10}, cfg)));
  CHECK(map.audit().empty());
}

TEST_CASE("updateParams applies mutable fields and validates") {
  MapState map(MapConfig{});
  ParamPatch patch;
  patch.n_lim = 123;
  patch.d_in = 45.0;
  const MapConfig applied = updateParams(map, patch);
  CHECK(applied.n_lim == 123);
  CHECK(applied.d_in == 45.0);
  CHECK(map.cfg().n_lim == 123);

  ParamPatch bad;
  bad.l_hit = -1.0;
  CHECK_THROWS_AS(updateParams(map, bad), std::invalid_argument);
  CHECK(map.cfg().n_lim == 123);  // unchanged on failure
}

TEST_CASE("updateParams rejects res and origin changes") {
  MapState map(MapConfig{});
  ParamPatch patch;
  patch.res = 0.2;
  CHECK_THROWS_AS(updateParams(map, patch), std::invalid_argument);
  ParamPatch origin_patch;
  origin_patch.origin = Vec3{1, 2, 3};
  CHECK_THROWS_AS(updateParams(map, origin_patch), std::invalid_argument);
  // Restating the current values is allowed.
  ParamPatch same;
  same.res = map.cfg().res;
  same.origin = map.cfg().origin;
  CHECK_NOTHROW(updateParams(map, same));
}

TEST_CASE("changing r_obs rebuilds inflation on the next pass") {
  MapState map(MapConfig{});
  auto nbhd = buildNeighborhood(map.cfg().res, map.cfg().r_obs);
  observeCycle(map, nbhd, 0.1, {{10, 10, 10}});
  REQUIRE(map.infSize() == 33);

  ParamPatch patch;
  patch.r_obs = 0.1;
  updateParams(map, patch);
  // Old inflation is gone, the occupied voxel is re-armed.
  CHECK(map.inflatedCount() == 0);
  CHECK(map.armed().size() == 1);

  nbhd = buildNeighborhood(map.cfg().res, map.cfg().r_obs);
  applyInflation(map, keyToCenter({10, 10, 10}, map.cfg()), nbhd);
  CHECK(map.inflatedCount() == 7);  // unit ball at the new radius
  CHECK(map.audit().empty());
}
