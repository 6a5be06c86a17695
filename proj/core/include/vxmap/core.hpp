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

#ifndef VXMAP_CORE_HPP_
#define VXMAP_CORE_HPP_

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace vxmap {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squaredNorm() const { return dot(*this); }
  double norm() const { return std::sqrt(squaredNorm()); }
  bool isFinite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
  bool operator==(const Vec3&) const = default;
};

/// Signed 3D voxel grid index. Components cover the full int32 range, which
/// is ample headroom for hundreds of meters at centimeter resolutions.
struct VoxelKey {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  auto operator<=>(const VoxelKey&) const = default;
  VoxelKey operator+(const VoxelKey& o) const {
    return {x + o.x, y + o.y, z + o.z};
  }
  VoxelKey operator-() const { return {-x, -y, -z}; }
};

struct VoxelKeyHash {
  size_t operator()(const VoxelKey& k) const {
    return static_cast<size_t>(static_cast<uint32_t>(k.x) * 73856093u ^
                               static_cast<uint32_t>(k.y) * 19349669u ^
                               static_cast<uint32_t>(k.z) * 83492791u);
  }
};

/// Occupancy state, ordered Free < Unknown < Occ.
enum class OccState : uint8_t { Free = 0, Unknown = 1, Occ = 2 };

const char* stateName(OccState s);

/// ln(p / (1 - p)). Throws std::invalid_argument unless 0 < p < 1.
double logitOf(double p);

/// Inverse of logitOf.
double probOf(double l);

constexpr double kUnbounded = std::numeric_limits<double>::infinity();
constexpr uint64_t kNoVoxelLimit = std::numeric_limits<uint64_t>::max();

struct MapConfig {
  double res = 0.1;        // meters per voxel, immutable once a map exists
  Vec3 origin = {};        // world position of grid corner (0,0,0)
  double p_init = 0.80;    // occupancy prior applied on first observation
  double l_hit = logitOf(0.65);
  double l_miss = logitOf(0.35);
  double l_min = logitOf(0.12);
  double l_max = logitOf(0.97);
  double l_occ_th = logitOf(0.80);
  double l_free_th = logitOf(0.30);
  double d_in = kUnbounded;   // input range gate, meters
  double d_inf = kUnbounded;  // inflation update range gate, meters
  double r_obs = 0.2;         // obstacle inflation radius, meters
  uint64_t n_lim = kNoVoxelLimit;  // retained occupied-voxel limit
  uint32_t ring_capacity = 50;     // share outbox depth, frames

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

VoxelKey posToKey(const Vec3& p, const MapConfig& cfg);
Vec3 keyToCenter(const VoxelKey& k, const MapConfig& cfg);
OccState stateOf(double log_odds, const MapConfig& cfg);

}  // namespace vxmap

#endif  // VXMAP_CORE_HPP_
