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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "vxmap/inflate.hpp"
#include "vxmap/integrate.hpp"
#include "vxmap/occupancy.hpp"
#include "vxmap/raycast.hpp"
#include "vxmap/retain.hpp"
#include "vxmap/share.hpp"
#include "vxmap/sim.hpp"
#include "vxmap/voxel_map.hpp"

using namespace vxmap;

namespace {

// Populates `map` with `n` occupied single-voxel records and returns them.
std::vector<VoxelRecord*> populate(MapState& map,
                                   const InflationNeighborhood& nbhd,
                                   size_t n) {
  UpdateStats stats;
  double stamp = 0.0;
  std::vector<VoxelRecord*> recs;
  for (size_t i = 0; i < n; ++i) {
    stamp += 0.001;
    const VoxelKey key{int32_t(i % 1000), int32_t(i / 1000), 0};
    SensorFrame frame;
    frame.stamp = stamp;
    frame.origin = keyToCenter(key, map.cfg());
    frame.points = {frame.origin};
    ingestFrame(map, frame, stats);
    applyOccupancyCheck(map);
    applyInflation(map, frame.origin, nbhd);
    applyRetention(map);
    recs.push_back(map.findOcc(key));
  }
  return recs;
}

// History-buffer recency refresh (erase + reappend) at various resident
// buffer sizes; the paper-facing claim is O(1) in the buffer size.
void BM_HistoryRefresh(benchmark::State& state) {
  const size_t n = size_t(state.range(0));
  MapConfig cfg;
  cfg.r_obs = 0.0;
  MapState map(cfg);
  const auto nbhd = buildNeighborhood(cfg.res, cfg.r_obs);
  const auto recs = populate(map, nbhd, n);

  std::mt19937_64 rng(n);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  for (auto _ : state) {
    for (int i = 0; i < 100; ++i) map.pushKeep(recs[pick(rng)]);
    applyRetention(map);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_HistoryRefresh)->Arg(1000)->Arg(10000)->Arg(100000);

// Full update cycle on simulated scans (arg = rays per frame).
void BM_UpdateCycle(benchmark::State& state) {
  sim::SceneSpec spec;
  spec.bounds = {{0, 0, 0}, {20, 20, 5}};
  spec.density = 0.05;
  const sim::Scene scene = sim::genScene(3, spec);
  sim::SensorSpec sensor;
  sensor.rays_per_frame = uint32_t(state.range(0));
  sensor.max_range = 30.0;

  std::vector<SensorFrame> frames;
  for (int i = 0; i < 32; ++i) {
    sim::Pose pose;
    pose.position = {10 + 2 * std::cos(0.2 * i), 10 + 2 * std::sin(0.2 * i),
                     2.5};
    frames.push_back(sim::simulateScan(scene, pose, sensor, i));
  }

  MapConfig cfg;
  cfg.n_lim = 50000;
  VoxelMap map(cfg);
  double stamp = 0.0;
  size_t next = 0;
  uint64_t points = 0;
  for (auto _ : state) {
    SensorFrame frame = frames[next];
    next = (next + 1) % frames.size();
    stamp += 0.1;
    frame.stamp = stamp;
    points += frame.points.size();
    benchmark::DoNotOptimize(map.update(frame));
  }
  state.SetItemsProcessed(int64_t(points));
}
BENCHMARK(BM_UpdateCycle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

// Grid traversal alone (arg = ray length in voxels).
void BM_Raycast(benchmark::State& state) {
  const MapConfig cfg;
  const int32_t len = int32_t(state.range(0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  std::vector<VoxelKey> targets;
  for (int i = 0; i < 256; ++i) {
    const Vec3 d = {dir(rng), dir(rng), dir(rng)};
    const double norm = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z) + 1e-9;
    targets.push_back(posToKey(
        {d.x / norm * len * cfg.res, d.y / norm * len * cfg.res,
         d.z / norm * len * cfg.res},
        cfg));
  }
  const Vec3 origin = {0.05, 0.05, 0.05};
  size_t next = 0;
  uint64_t visited = 0;
  for (auto _ : state) {
    traverseRay(origin, targets[next], cfg,
                [&](const VoxelKey& k) { benchmark::DoNotOptimize(k); ++visited; });
    next = (next + 1) % targets.size();
  }
  state.SetItemsProcessed(int64_t(visited));
}
BENCHMARK(BM_Raycast)->Arg(32)->Arg(128)->Arg(512);

ShareFrame denseDelta(size_t n_keys) {
  // Spatially coherent keys, as produced by real deltas.
  ShareFrame f;
  f.res = 0.1f;
  std::mt19937_64 rng(n_keys);
  std::uniform_int_distribution<int32_t> base(-500, 500);
  while (f.keys.size() < n_keys) {
    const VoxelKey b{base(rng), base(rng), base(rng)};
    for (int32_t i = 0; i < 8 && f.keys.size() < n_keys; ++i) {
      f.keys.push_back({b.x + i, b.y, b.z});
    }
  }
  std::sort(f.keys.begin(), f.keys.end());
  f.keys.erase(std::unique(f.keys.begin(), f.keys.end()), f.keys.end());
  return f;
}

void BM_EncodeFrame(benchmark::State& state) {
  const ShareFrame f = denseDelta(size_t(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(encodeFrame(f));
  }
  state.SetItemsProcessed(state.iterations() * int64_t(f.keys.size()));
}
BENCHMARK(BM_EncodeFrame)->Arg(100)->Arg(1000)->Arg(10000);

void BM_DecodeFrame(benchmark::State& state) {
  const std::vector<uint8_t> bytes = encodeFrame(denseDelta(size_t(state.range(0))));
  size_t keys = 0;
  for (auto _ : state) {
    const ShareFrame f = decodeFrame(bytes);
    keys += f.keys.size();
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(int64_t(keys));
}
BENCHMARK(BM_DecodeFrame)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
