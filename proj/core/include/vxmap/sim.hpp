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

#ifndef VXMAP_SIM_HPP_
#define VXMAP_SIM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vxmap/core.hpp"
#include "vxmap/frame.hpp"

namespace vxmap::sim {

struct Aabb {
  Vec3 min;
  Vec3 max;
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  Vec3 extent() const { return max - min; }
  double volume() const {
    const Vec3 e = extent();
    return e.x * e.y * e.z;
  }
};

struct Cylinder {  // vertical axis
  double cx = 0.0;
  double cy = 0.0;
  double z0 = 0.0;
  double z1 = 0.0;
  double radius = 0.0;
};

using Obstacle = std::variant<Aabb, Cylinder>;

struct Scene {
  Aabb bounds;
  bool walls = true;  // bounds act as enclosing surfaces producing returns
  std::vector<Obstacle> obstacles;
  uint64_t seed = 0;
  double fill_fraction = 0.0;  // obstacle volume / bounds volume
};

struct SceneSpec {
  Aabb bounds = {{0, 0, 0}, {32, 32, 32}};
  bool walls = true;
  double density = 0.05;  // target obstacle fill fraction
  double min_obstacle = 0.5;
  double max_obstacle = 4.0;
  double cylinder_ratio = 0.3;  // fraction of obstacles that are cylinders
};

struct SensorSpec {
  double max_range = 30.0;   // meters
  double hfov_deg = 360.0;   // (0, 360]
  double vfov_deg = 60.0;    // (0, 180]
  double rate_hz = 10.0;
  uint32_t rays_per_frame = 2000;
  double mount_pitch_deg = 0.0;  // tilts the FOV center downward when > 0

  void validate() const;
};

struct Pose {
  Vec3 position;
  double yaw = 0.0;  // radians
};

/// Deterministic obstacle placement (non-overlapping, rejection sampled).
/// Throws std::runtime_error when the requested density cannot be placed.
Scene genScene(uint64_t seed, const SceneSpec& spec);

/// Casts rays_per_frame rays over the FOV with a low-discrepancy pattern
/// advanced by frame_index; each ray returns the nearest analytic surface
/// intersection within max_range, or no point.
SensorFrame simulateScan(const Scene& scene, const Pose& pose,
                         const SensorSpec& spec, uint64_t frame_index);

/// Closed-form nearest intersection of the ray with scene surfaces, or
/// nothing within max_range. Exposed for oracle checks.
std::optional<double> castRay(const Scene& scene, const Vec3& origin,
                              const Vec3& dir, double max_range);

struct BurstSpec {
  uint64_t start = 0;  // first dropped frame index
  uint64_t length = 0;
};

/// Deterministic lossy delivery: per-index Bernoulli drops plus contiguous
/// outage bursts. Preserves order of delivered frames.
std::vector<size_t> lossyChannelKeptIndices(size_t frame_count, double loss_rate,
                                            uint64_t seed,
                                            const std::vector<BurstSpec>& bursts);

template <typename T>
std::vector<T> lossyChannel(const std::vector<T>& frames, double loss_rate,
                            uint64_t seed,
                            const std::vector<BurstSpec>& bursts = {}) {
  std::vector<T> kept;
  for (size_t i : lossyChannelKeptIndices(frames.size(), loss_rate, seed, bursts)) {
    kept.push_back(frames[i]);
  }
  return kept;
}

/// Bounded array-based reference map. Applies the same update semantics as
/// the hash-backed pipeline (creation prior, per-cycle hit/miss folding,
/// clamping, free-cell removal) over a dense grid with no voxel limit, as
/// an independent equivalence oracle.
class DenseReferenceMap {
 public:
  DenseReferenceMap(const MapConfig& cfg, const Aabb& bounds);

  /// One update cycle. Throws std::out_of_range if a point or a traversed
  /// cell leaves the bounded grid.
  void integrate(const SensorFrame& frame);

  struct Cell {
    double log_odds = 0.0;
    OccState state = OccState::Unknown;
    bool exists = false;  // mirrors occupancy-map membership
  };

  const Cell* cellAt(const VoxelKey& key) const;  // nullptr outside bounds
  std::vector<VoxelKey> occupiedKeys() const;     // sorted
  std::vector<std::pair<VoxelKey, Cell>> existingCells() const;  // sorted
  size_t existingCount() const;

 private:
  size_t indexOf(const VoxelKey& key) const;  // throws std::out_of_range

  MapConfig cfg_;
  VoxelKey lo_;
  int32_t nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<Cell> cells_;
  std::vector<uint32_t> hits_, misses_;
  std::vector<size_t> touched_;
  std::vector<uint8_t> in_touched_;
};

/// Scene spec text format (key-value lines; see the gen tool docs).
std::string sceneToText(const Scene& scene);
Scene sceneFromText(const std::string& text);
void writeSceneFile(const std::string& path, const Scene& scene);
Scene readSceneFile(const std::string& path);

}  // namespace vxmap::sim

#endif  // VXMAP_SIM_HPP_
