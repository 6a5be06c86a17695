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

#include "vxmap/core.hpp"

#include <stdexcept>
#include <string>

namespace vxmap {

const char* stateName(OccState s) {
  switch (s) {
    case OccState::Free:
      return "Free";
    case OccState::Unknown:
      return "Unknown";
    case OccState::Occ:
      return "Occ";
  }
  return "?";
}

double logitOf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("logitOf: probability must lie in (0, 1), got " +
                                std::to_string(p));
  }
  return std::log(p / (1.0 - p));
}

double probOf(double l) { return 1.0 / (1.0 + std::exp(-l)); }

void MapConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!(res > 0.0) || !std::isfinite(res)) fail("MapConfig: res must be > 0");
  if (!origin.isFinite()) fail("MapConfig: origin must be finite");
  if (!(p_init > 0.0 && p_init < 1.0)) fail("MapConfig: p_init must lie in (0, 1)");
  if (!(l_hit > 0.0)) fail("MapConfig: l_hit must be > 0");
  if (!(l_miss < 0.0)) fail("MapConfig: l_miss must be < 0");
  if (!(l_min <= l_free_th)) fail("MapConfig: requires l_min <= l_free_th");
  if (!(l_free_th < l_occ_th)) fail("MapConfig: requires l_free_th < l_occ_th");
  if (!(l_occ_th <= l_max)) fail("MapConfig: requires l_occ_th <= l_max");
  if (!(d_in > 0.0)) fail("MapConfig: d_in must be > 0");
  if (!(d_inf > 0.0)) fail("MapConfig: d_inf must be > 0");
  if (!(r_obs >= 0.0) || !std::isfinite(r_obs)) fail("MapConfig: r_obs must be >= 0 and finite");
  if (n_lim < 1) fail("MapConfig: n_lim must be >= 1");
  if (ring_capacity < 1) fail("MapConfig: ring_capacity must be >= 1");
}

VoxelKey posToKey(const Vec3& p, const MapConfig& cfg) {
  return {static_cast<int32_t>(std::floor((p.x - cfg.origin.x) / cfg.res)),
          static_cast<int32_t>(std::floor((p.y - cfg.origin.y) / cfg.res)),
          static_cast<int32_t>(std::floor((p.z - cfg.origin.z) / cfg.res))};
}

Vec3 keyToCenter(const VoxelKey& k, const MapConfig& cfg) {
  return {cfg.origin.x + (k.x + 0.5) * cfg.res,
          cfg.origin.y + (k.y + 0.5) * cfg.res,
          cfg.origin.z + (k.z + 0.5) * cfg.res};
}

OccState stateOf(double log_odds, const MapConfig& cfg) {
  if (log_odds >= cfg.l_occ_th) return OccState::Occ;
  if (log_odds <= cfg.l_free_th) return OccState::Free;
  return OccState::Unknown;
}

}  // namespace vxmap
