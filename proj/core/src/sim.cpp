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

#include "vxmap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vxmap/raycast.hpp"

namespace vxmap::sim {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRayEps = 1e-9;

double halton(uint64_t index, uint32_t base) {
  double f = 1.0, r = 0.0;
  uint64_t i = index + 1;  // skip the degenerate zeroth sample
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

Aabb obstacleBox(const Obstacle& ob) {
  if (const Aabb* b = std::get_if<Aabb>(&ob)) return *b;
  const Cylinder& c = std::get<Cylinder>(ob);
  return {{c.cx - c.radius, c.cy - c.radius, c.z0},
          {c.cx + c.radius, c.cy + c.radius, c.z1}};
}

bool boxesOverlap(const Aabb& a, const Aabb& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y &&
         b.min.y < a.max.y && a.min.z < b.max.z && b.min.z < a.max.z;
}

double obstacleVolume(const Obstacle& ob) {
  if (const Aabb* b = std::get_if<Aabb>(&ob)) return b->volume();
  const Cylinder& c = std::get<Cylinder>(ob);
  return kPi * c.radius * c.radius * (c.z1 - c.z0);
}

// Nearest positive intersection with an axis-aligned box from outside (or
// the exit distance when `exit` is set, for enclosing walls).
std::optional<double> rayBox(const Vec3& o, const Vec3& d, const Aabb& box,
                             bool exit) {
  double t0 = -kUnbounded, t1 = kUnbounded;
  const double os[3] = {o.x, o.y, o.z};
  const double ds[3] = {d.x, d.y, d.z};
  const double mins[3] = {box.min.x, box.min.y, box.min.z};
  const double maxs[3] = {box.max.x, box.max.y, box.max.z};
  for (int i = 0; i < 3; ++i) {
    if (ds[i] == 0.0) {
      if (os[i] < mins[i] || os[i] > maxs[i]) return std::nullopt;
      continue;
    }
    double a = (mins[i] - os[i]) / ds[i];
    double b = (maxs[i] - os[i]) / ds[i];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return std::nullopt;
  }
  if (exit) return t1 > kRayEps ? std::optional<double>(t1) : std::nullopt;
  return t0 > kRayEps ? std::optional<double>(t0) : std::nullopt;
}

std::optional<double> rayCylinder(const Vec3& o, const Vec3& d, const Cylinder& c) {
  std::optional<double> best;
  auto consider = [&](double t) {
    if (t > kRayEps && (!best || t < *best)) best = t;
  };
  // Side surface.
  const double ox = o.x - c.cx, oy = o.y - c.cy;
  const double a = d.x * d.x + d.y * d.y;
  if (a > 0.0) {
    const double b = 2.0 * (ox * d.x + oy * d.y);
    const double q = ox * ox + oy * oy - c.radius * c.radius;
    const double disc = b * b - 4.0 * a * q;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      for (double t : {(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)}) {
        const double z = o.z + t * d.z;
        if (z >= c.z0 && z <= c.z1) consider(t);
      }
    }
  }
  // Caps.
  if (d.z != 0.0) {
    for (double zcap : {c.z0, c.z1}) {
      const double t = (zcap - o.z) / d.z;
      const double x = ox + t * d.x, y = oy + t * d.y;
      if (x * x + y * y <= c.radius * c.radius) consider(t);
    }
  }
  return best;
}

}  // namespace

void SensorSpec::validate() const {
  if (!(hfov_deg > 0.0 && hfov_deg <= 360.0))
    throw std::invalid_argument("SensorSpec: hfov must lie in (0, 360]");
  if (!(vfov_deg > 0.0 && vfov_deg <= 180.0))
    throw std::invalid_argument("SensorSpec: vfov must lie in (0, 180]");
  if (rays_per_frame == 0)
    throw std::invalid_argument("SensorSpec: rays_per_frame must be > 0");
  if (!(max_range > 0.0))
    throw std::invalid_argument("SensorSpec: max_range must be > 0");
}

Scene genScene(uint64_t seed, const SceneSpec& spec) {
  if (spec.density < 0.0 || spec.density >= 0.5) {
    throw std::runtime_error("genScene: density must lie in [0, 0.5)");
  }
  Scene scene;
  scene.bounds = spec.bounds;
  scene.walls = spec.walls;
  scene.seed = seed;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total_volume = spec.bounds.volume();
  double placed_volume = 0.0;
  int failures = 0;
  const int max_failures = 10000;

  while (placed_volume / total_volume < spec.density) {
    if (failures > max_failures) {
      throw std::runtime_error("genScene: cannot reach requested density");
    }
    const Vec3 ext = spec.bounds.extent();
    auto dim = [&](double span) {
      const double hi = std::min(spec.max_obstacle, span);
      const double lo = std::min(spec.min_obstacle, hi);
      return lo + unit(rng) * (hi - lo);
    };
    Obstacle candidate;
    if (unit(rng) < spec.cylinder_ratio) {
      Cylinder c;
      c.radius = 0.5 * dim(std::min(ext.x, ext.y));
      const double h = dim(ext.z);
      c.cx = spec.bounds.min.x + c.radius + unit(rng) * (ext.x - 2.0 * c.radius);
      c.cy = spec.bounds.min.y + c.radius + unit(rng) * (ext.y - 2.0 * c.radius);
      c.z0 = spec.bounds.min.z + unit(rng) * (ext.z - h);
      c.z1 = c.z0 + h;
      candidate = c;
    } else {
      const Vec3 size{dim(ext.x), dim(ext.y), dim(ext.z)};
      Vec3 lo{spec.bounds.min.x + unit(rng) * (ext.x - size.x),
              spec.bounds.min.y + unit(rng) * (ext.y - size.y),
              spec.bounds.min.z + unit(rng) * (ext.z - size.z)};
      candidate = Aabb{lo, lo + size};
    }
    const Aabb cbox = obstacleBox(candidate);
    bool overlaps = false;
    for (const Obstacle& ob : scene.obstacles) {
      if (boxesOverlap(cbox, obstacleBox(ob))) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) {
      ++failures;
      continue;
    }
    placed_volume += obstacleVolume(candidate);
    scene.obstacles.push_back(candidate);
  }
  scene.fill_fraction = placed_volume / total_volume;
  return scene;
}

std::optional<double> castRay(const Scene& scene, const Vec3& origin,
                              const Vec3& dir, double max_range) {
  std::optional<double> best;
  auto consider = [&](std::optional<double> t) {
    if (t && *t <= max_range && (!best || *t < *best)) best = t;
  };
  for (const Obstacle& ob : scene.obstacles) {
    if (const Aabb* b = std::get_if<Aabb>(&ob)) {
      consider(rayBox(origin, dir, *b, false));
    } else {
      consider(rayCylinder(origin, dir, std::get<Cylinder>(ob)));
    }
  }
  if (scene.walls) consider(rayBox(origin, dir, scene.bounds, true));
  return best;
}

SensorFrame simulateScan(const Scene& scene, const Pose& pose,
                         const SensorSpec& spec, uint64_t frame_index) {
  spec.validate();
  if (!scene.bounds.contains(pose.position)) {
    throw std::invalid_argument("simulateScan: pose outside scene bounds");
  }
  SensorFrame frame;
  frame.stamp = static_cast<double>(frame_index) / spec.rate_hz;
  frame.origin = pose.position;
  frame.points.reserve(spec.rays_per_frame);

  const double hfov = spec.hfov_deg * kPi / 180.0;
  const double vfov = spec.vfov_deg * kPi / 180.0;
  const double pitch = -spec.mount_pitch_deg * kPi / 180.0;
  const uint64_t base_index = frame_index * spec.rays_per_frame;

  for (uint32_t i = 0; i < spec.rays_per_frame; ++i) {
    const uint64_t n = base_index + i;
    const double az = pose.yaw + hfov * (halton(n, 2) - 0.5);
    const double el = pitch + vfov * (halton(n, 3) - 0.5);
    const Vec3 dir{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                   std::sin(el)};
    if (auto t = castRay(scene, pose.position, dir, spec.max_range)) {
      frame.points.push_back(pose.position + dir * *t);
    }
  }
  return frame;
}

std::vector<size_t> lossyChannelKeptIndices(size_t frame_count, double loss_rate,
                                            uint64_t seed,
                                            const std::vector<BurstSpec>& bursts) {
  if (loss_rate < 0.0 || loss_rate >= 1.0) {
    throw std::invalid_argument("lossyChannel: loss_rate must lie in [0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<size_t> kept;
  for (size_t i = 0; i < frame_count; ++i) {
    const double draw = unit(rng);  // consumed even inside bursts, for stable patterns
    bool dropped = draw < loss_rate;
    for (const BurstSpec& b : bursts) {
      if (i >= b.start && i < b.start + b.length) dropped = true;
    }
    if (!dropped) kept.push_back(i);
  }
  return kept;
}

DenseReferenceMap::DenseReferenceMap(const MapConfig& cfg, const Aabb& bounds)
    : cfg_(cfg) {
  cfg_.validate();
  lo_ = posToKey(bounds.min, cfg_);
  const VoxelKey hi = posToKey(bounds.max, cfg_);
  nx_ = hi.x - lo_.x + 1;
  ny_ = hi.y - lo_.y + 1;
  nz_ = hi.z - lo_.z + 1;
  const size_t n = static_cast<size_t>(nx_) * ny_ * nz_;
  cells_.resize(n);
  hits_.assign(n, 0);
  misses_.assign(n, 0);
  in_touched_.assign(n, 0);
}

size_t DenseReferenceMap::indexOf(const VoxelKey& key) const {
  const int32_t x = key.x - lo_.x, y = key.y - lo_.y, z = key.z - lo_.z;
  if (x < 0 || y < 0 || z < 0 || x >= nx_ || y >= ny_ || z >= nz_) {
    throw std::out_of_range("DenseReferenceMap: key outside bounded grid");
  }
  return (static_cast<size_t>(z) * ny_ + y) * nx_ + x;
}

void DenseReferenceMap::integrate(const SensorFrame& frame) {
  // Mirrors the two-pass ingest: classification and hit counting first,
  // then miss counting over cells present in the occupancy set.
  std::vector<VoxelKey> targets;
  targets.reserve(frame.points.size());
  for (const Vec3& p : frame.points) {
    if (!p.isFinite()) continue;
    if ((p - frame.origin).norm() > cfg_.d_in) continue;
    const VoxelKey key = posToKey(p, cfg_);
    const size_t idx = indexOf(key);
    Cell& cell = cells_[idx];
    if (!cell.exists) {
      cell.exists = true;
      cell.log_odds += logitOf(cfg_.p_init);
    }
    hits_[idx] += 1;
    if (!in_touched_[idx]) {
      in_touched_[idx] = 1;
      touched_.push_back(idx);
    }
    targets.push_back(key);
  }
  for (const VoxelKey& target : targets) {
    traverseRay(frame.origin, target, cfg_, [&](const VoxelKey& cellkey) {
      const size_t idx = indexOf(cellkey);
      if (!cells_[idx].exists) return;
      misses_[idx] += 1;
      if (!in_touched_[idx]) {
        in_touched_[idx] = 1;
        touched_.push_back(idx);
      }
    });
  }
  for (const size_t idx : touched_) {
    Cell& cell = cells_[idx];
    cell.log_odds = std::clamp(
        cell.log_odds + hits_[idx] * cfg_.l_hit + misses_[idx] * cfg_.l_miss,
        cfg_.l_min, cfg_.l_max);
    hits_[idx] = 0;
    misses_[idx] = 0;
    cell.state = stateOf(cell.log_odds, cfg_);
    if (cell.state == OccState::Free) {
      // Known-free cells leave the map, matching the B_del purge.
      cell.exists = false;
      cell.log_odds = 0.0;
      cell.state = OccState::Unknown;
    }
    in_touched_[idx] = 0;
  }
  touched_.clear();
}

const DenseReferenceMap::Cell* DenseReferenceMap::cellAt(const VoxelKey& key) const {
  try {
    return &cells_[indexOf(key)];
  } catch (const std::out_of_range&) {
    return nullptr;
  }
}

std::vector<VoxelKey> DenseReferenceMap::occupiedKeys() const {
  std::vector<VoxelKey> keys;
  for (int32_t z = 0; z < nz_; ++z) {
    for (int32_t y = 0; y < ny_; ++y) {
      for (int32_t x = 0; x < nx_; ++x) {
        const Cell& c = cells_[(static_cast<size_t>(z) * ny_ + y) * nx_ + x];
        if (c.exists && c.state == OccState::Occ) {
          keys.push_back({lo_.x + x, lo_.y + y, lo_.z + z});
        }
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<std::pair<VoxelKey, DenseReferenceMap::Cell>>
DenseReferenceMap::existingCells() const {
  std::vector<std::pair<VoxelKey, Cell>> out;
  for (int32_t z = 0; z < nz_; ++z) {
    for (int32_t y = 0; y < ny_; ++y) {
      for (int32_t x = 0; x < nx_; ++x) {
        const Cell& c = cells_[(static_cast<size_t>(z) * ny_ + y) * nx_ + x];
        if (c.exists) out.push_back({{lo_.x + x, lo_.y + y, lo_.z + z}, c});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

size_t DenseReferenceMap::existingCount() const {
  size_t n = 0;
  for (const Cell& c : cells_) n += c.exists ? 1 : 0;
  return n;
}

std::string sceneToText(const Scene& scene) {
  std::ostringstream out;
  out.precision(17);
  out << "# vxmap scene\n";
  out << "seed " << scene.seed << "\n";
  out << "bounds " << scene.bounds.min.x << " " << scene.bounds.min.y << " "
      << scene.bounds.min.z << " " << scene.bounds.max.x << " "
      << scene.bounds.max.y << " " << scene.bounds.max.z << "\n";
  out << "walls " << (scene.walls ? "on" : "off") << "\n";
  out << "fill " << scene.fill_fraction << "\n";
  for (const Obstacle& ob : scene.obstacles) {
    if (const Aabb* b = std::get_if<Aabb>(&ob)) {
      out << "box " << b->min.x << " " << b->min.y << " " << b->min.z << " "
          << b->max.x << " " << b->max.y << " " << b->max.z << "\n";
    } else {
      const Cylinder& c = std::get<Cylinder>(ob);
      out << "cylinder " << c.cx << " " << c.cy << " " << c.z0 << " " << c.z1
          << " " << c.radius << "\n";
    }
  }
  return out.str();
}

Scene sceneFromText(const std::string& text) {
  Scene scene;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto want = [&](bool ok) {
      if (!ok) {
        throw std::runtime_error("scene line " + std::to_string(lineno) +
                                 ": malformed '" + kw + "' entry");
      }
    };
    if (kw == "seed") {
      want(static_cast<bool>(ls >> scene.seed));
    } else if (kw == "bounds") {
      want(static_cast<bool>(ls >> scene.bounds.min.x >> scene.bounds.min.y >>
                             scene.bounds.min.z >> scene.bounds.max.x >>
                             scene.bounds.max.y >> scene.bounds.max.z));
    } else if (kw == "walls") {
      std::string v;
      want(static_cast<bool>(ls >> v) && (v == "on" || v == "off"));
      scene.walls = v == "on";
    } else if (kw == "fill") {
      want(static_cast<bool>(ls >> scene.fill_fraction));
    } else if (kw == "box") {
      Aabb b;
      want(static_cast<bool>(ls >> b.min.x >> b.min.y >> b.min.z >> b.max.x >>
                             b.max.y >> b.max.z));
      scene.obstacles.push_back(b);
    } else if (kw == "cylinder") {
      Cylinder c;
      want(static_cast<bool>(ls >> c.cx >> c.cy >> c.z0 >> c.z1 >> c.radius));
      scene.obstacles.push_back(c);
    } else {
      throw std::runtime_error("scene line " + std::to_string(lineno) +
                               ": unknown keyword '" + kw + "'");
    }
  }
  return scene;
}

void writeSceneFile(const std::string& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << sceneToText(scene);
}

Scene readSceneFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sceneFromText(buf.str());
}

}  // namespace vxmap::sim
