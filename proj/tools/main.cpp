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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vxmap/io.hpp"
#include "vxmap/share.hpp"
#include "vxmap/sim.hpp"
#include "vxmap/voxel_map.hpp"

namespace {

using nlohmann::json;
using namespace vxmap;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// ---------------------------------------------------------------------------
// map configuration flags

struct MapFlags {
  double res = 0.1;
  std::vector<double> origin = {0.0, 0.0, 0.0};
  double p_init = 0.80;
  double p_hit = 0.65;
  double p_miss = 0.35;
  double p_min = 0.12;
  double p_max = 0.97;
  double p_occ = 0.80;
  double p_free = 0.30;
  double d_in = kUnbounded;
  double d_inf = kUnbounded;
  double r_obs = 0.2;
  uint64_t n_lim = kNoVoxelLimit;
  uint32_t ring_capacity = 50;

  MapConfig toConfig() const {
    MapConfig cfg;
    cfg.res = res;
    cfg.origin = {origin[0], origin[1], origin[2]};
    cfg.p_init = p_init;
    cfg.l_hit = logitOf(p_hit);
    cfg.l_miss = logitOf(p_miss);
    cfg.l_min = logitOf(p_min);
    cfg.l_max = logitOf(p_max);
    cfg.l_occ_th = logitOf(p_occ);
    cfg.l_free_th = logitOf(p_free);
    cfg.d_in = d_in;
    cfg.d_inf = d_inf;
    cfg.r_obs = r_obs;
    cfg.n_lim = n_lim;
    cfg.ring_capacity = ring_capacity;
    cfg.validate();
    return cfg;
  }
};

void addMapFlags(CLI::App* cmd, MapFlags& f) {
  cmd->add_option("--res", f.res, "Voxel edge length [m]")->capture_default_str();
  cmd->add_option("--map-origin", f.origin, "Grid origin x y z [m]")->expected(3);
  cmd->add_option("--p-init", f.p_init, "Occupancy prior on first observation")
      ->capture_default_str();
  cmd->add_option("--p-hit", f.p_hit, "Per-hit occupancy probability")
      ->capture_default_str();
  cmd->add_option("--p-miss", f.p_miss, "Per-miss occupancy probability")
      ->capture_default_str();
  cmd->add_option("--p-min", f.p_min, "Lower probability clamp")->capture_default_str();
  cmd->add_option("--p-max", f.p_max, "Upper probability clamp")->capture_default_str();
  cmd->add_option("--p-occ", f.p_occ, "Occupied-state threshold probability")
      ->capture_default_str();
  cmd->add_option("--p-free", f.p_free, "Free-state threshold probability")
      ->capture_default_str();
  cmd->add_option("--d-in", f.d_in, "Input range gate [m] (inf = unbounded)");
  cmd->add_option("--d-inf", f.d_inf, "Inflation range gate [m] (inf = unbounded)");
  cmd->add_option("--r-obs", f.r_obs, "Obstacle inflation radius [m]")
      ->capture_default_str();
  cmd->add_option("--n-lim", f.n_lim, "Retained occupied-voxel limit");
  cmd->add_option("--ring-capacity", f.ring_capacity, "Share outbox depth [frames]")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// params file: `set KEY VALUE` lines apply at startup, `at N set KEY VALUE`
// lines apply immediately before frame N.

struct ScheduledPatch {
  uint64_t frame = 0;
  ParamPatch patch;
};

void patchSet(ParamPatch& p, const std::string& key, const std::string& value,
              int lineno) {
  auto bad = [&]() {
    throw CLI::ValidationError("params line " + std::to_string(lineno) +
                               ": bad value for '" + key + "'");
  };
  auto num = [&]() {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      bad();
      return 0.0;
    }
  };
  if (key == "p_init") p.p_init = num();
  else if (key == "p_hit") p.l_hit = logitOf(num());
  else if (key == "p_miss") p.l_miss = logitOf(num());
  else if (key == "p_min") p.l_min = logitOf(num());
  else if (key == "p_max") p.l_max = logitOf(num());
  else if (key == "p_occ") p.l_occ_th = logitOf(num());
  else if (key == "p_free") p.l_free_th = logitOf(num());
  else if (key == "d_in") p.d_in = num();
  else if (key == "d_inf") p.d_inf = num();
  else if (key == "r_obs") p.r_obs = num();
  else if (key == "n_lim") p.n_lim = static_cast<uint64_t>(num());
  else if (key == "ring_capacity") p.ring_capacity = static_cast<uint32_t>(num());
  else if (key == "res") p.res = num();  // rejected downstream: immutable
  else {
    throw CLI::ValidationError("params line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
}

void parseParamsFile(const std::string& path, ParamPatch& initial,
                     std::vector<ScheduledPatch>& schedule) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open params file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "set") {
      std::string key, value;
      if (!(ls >> key >> value)) {
        throw CLI::ValidationError("params line " + std::to_string(lineno) +
                                   ": expected 'set KEY VALUE'");
      }
      patchSet(initial, key, value, lineno);
    } else if (kw == "at") {
      uint64_t frame;
      std::string set_kw, key, value;
      if (!(ls >> frame >> set_kw >> key >> value) || set_kw != "set") {
        throw CLI::ValidationError("params line " + std::to_string(lineno) +
                                   ": expected 'at N set KEY VALUE'");
      }
      ScheduledPatch sp;
      sp.frame = frame;
      patchSet(sp.patch, key, value, lineno);
      schedule.push_back(sp);
    } else {
      throw CLI::ValidationError("params line " + std::to_string(lineno) +
                                 ": expected 'set' or 'at'");
    }
  }
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const ScheduledPatch& a, const ScheduledPatch& b) {
                     return a.frame < b.frame;
                   });
}

// ---------------------------------------------------------------------------
// synthetic input: scene + waypoint trajectory -> frames

struct SceneFlags {
  std::vector<double> bounds = {0, 0, 0, 32, 32, 16};
  bool no_walls = false;
  double density = 0.05;
  double min_obstacle = 0.5;
  double max_obstacle = 4.0;
  double cylinder_ratio = 0.3;
  uint64_t seed = 1;

  sim::SceneSpec toSpec() const {
    sim::SceneSpec spec;
    spec.bounds = {{bounds[0], bounds[1], bounds[2]},
                   {bounds[3], bounds[4], bounds[5]}};
    spec.walls = !no_walls;
    spec.density = density;
    spec.min_obstacle = min_obstacle;
    spec.max_obstacle = max_obstacle;
    spec.cylinder_ratio = cylinder_ratio;
    return spec;
  }
};

void addSceneFlags(CLI::App* cmd, SceneFlags& f) {
  cmd->add_option("--bounds", f.bounds, "Scene box x0 y0 z0 x1 y1 z1 [m]")
      ->expected(6);
  cmd->add_flag("--no-walls", f.no_walls, "Scene bounds produce no returns");
  cmd->add_option("--density", f.density, "Obstacle volume fill fraction")
      ->capture_default_str();
  cmd->add_option("--min-obstacle", f.min_obstacle, "Minimum obstacle edge [m]")
      ->capture_default_str();
  cmd->add_option("--max-obstacle", f.max_obstacle, "Maximum obstacle edge [m]")
      ->capture_default_str();
  cmd->add_option("--cylinder-ratio", f.cylinder_ratio,
                  "Fraction of obstacles that are cylinders")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Scene/trajectory RNG seed")
      ->capture_default_str();
}

struct SensorFlags {
  double max_range = 30.0;
  double hfov = 360.0;
  double vfov = 60.0;
  double rate = 10.0;
  uint32_t rays = 2000;
  double pitch = 0.0;

  sim::SensorSpec toSpec() const {
    sim::SensorSpec spec;
    spec.max_range = max_range;
    spec.hfov_deg = hfov;
    spec.vfov_deg = vfov;
    spec.rate_hz = rate;
    spec.rays_per_frame = rays;
    spec.mount_pitch_deg = pitch;
    return spec;
  }
};

void addSensorFlags(CLI::App* cmd, SensorFlags& f) {
  cmd->add_option("--max-range", f.max_range, "Sensor range [m]")
      ->capture_default_str();
  cmd->add_option("--hfov", f.hfov, "Horizontal FOV [deg]")->capture_default_str();
  cmd->add_option("--vfov", f.vfov, "Vertical FOV [deg]")->capture_default_str();
  cmd->add_option("--rate", f.rate, "Frame rate [Hz]")->capture_default_str();
  cmd->add_option("--rays", f.rays, "Rays per frame")->capture_default_str();
  cmd->add_option("--pitch", f.pitch, "Sensor mount pitch down [deg]")
      ->capture_default_str();
}

struct TrajFlags {
  std::string waypoints;  // "x,y,z; x,y,z; ..." — default: inset rectangle loop
  double speed = 1.0;
  uint64_t frames = 100;
};

void addTrajFlags(CLI::App* cmd, TrajFlags& f) {
  cmd->add_option("--waypoints", f.waypoints,
                  "Semicolon-separated waypoint list 'x,y,z; x,y,z; ...'");
  cmd->add_option("--speed", f.speed, "Constant trajectory speed [m/s]")
      ->capture_default_str();
  cmd->add_option("--frames", f.frames, "Number of frames to simulate")
      ->capture_default_str();
}

std::vector<Vec3> parseWaypoints(const std::string& text) {
  std::vector<Vec3> points;
  std::istringstream segs(text);
  std::string seg;
  while (std::getline(segs, seg, ';')) {
    std::replace(seg.begin(), seg.end(), ',', ' ');
    std::istringstream ls(seg);
    Vec3 p;
    if (!(ls >> p.x >> p.y >> p.z)) {
      throw CLI::ValidationError("bad waypoint segment '" + seg + "'");
    }
    points.push_back(p);
  }
  return points;
}

std::vector<Vec3> defaultWaypoints(const sim::Aabb& bounds) {
  // Rectangle loop inset 25% from the walls at mid-height.
  const Vec3 e = bounds.extent();
  const double z = bounds.min.z + 0.5 * e.z;
  const double x0 = bounds.min.x + 0.25 * e.x, x1 = bounds.max.x - 0.25 * e.x;
  const double y0 = bounds.min.y + 0.25 * e.y, y1 = bounds.max.y - 0.25 * e.y;
  return {{x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z}};
}

/// Constant-speed pose along the closed waypoint loop at frame `i`.
sim::Pose poseAt(const std::vector<Vec3>& wps, double speed, double rate_hz,
                 uint64_t frame_index) {
  sim::Pose pose;
  if (wps.size() == 1 || speed <= 0.0) {  // hover
    pose.position = wps.front();
    return pose;
  }
  std::vector<double> seg_len;
  double total = 0.0;
  for (size_t i = 0; i < wps.size(); ++i) {
    const double d = (wps[(i + 1) % wps.size()] - wps[i]).norm();
    seg_len.push_back(d);
    total += d;
  }
  if (total <= 0.0) {
    pose.position = wps.front();
    return pose;
  }
  double s = std::fmod(speed * frame_index / rate_hz, total);
  for (size_t i = 0; i < wps.size(); ++i) {
    if (s <= seg_len[i] || i + 1 == wps.size()) {
      const Vec3& a = wps[i];
      const Vec3& b = wps[(i + 1) % wps.size()];
      const double f = seg_len[i] > 0.0 ? s / seg_len[i] : 0.0;
      pose.position = a + (b - a) * f;
      pose.yaw = std::atan2(b.y - a.y, b.x - a.x);
      return pose;
    }
    s -= seg_len[i];
  }
  pose.position = wps.front();
  return pose;
}

std::vector<SensorFrame> synthesizeFrames(const sim::Scene& scene,
                                          const sim::SensorSpec& sensor,
                                          const TrajFlags& traj) {
  std::vector<Vec3> wps = traj.waypoints.empty()
                              ? defaultWaypoints(scene.bounds)
                              : parseWaypoints(traj.waypoints);
  if (wps.empty()) throw CLI::ValidationError("empty waypoint list");
  for (const Vec3& w : wps) {
    if (!scene.bounds.contains(w)) {
      throw std::runtime_error("infeasible trajectory: waypoint outside scene bounds");
    }
  }
  std::vector<SensorFrame> frames;
  frames.reserve(traj.frames);
  for (uint64_t i = 0; i < traj.frames; ++i) {
    const sim::Pose pose = poseAt(wps, traj.speed, sensor.rate_hz, i);
    frames.push_back(sim::simulateScan(scene, pose, sensor, i));
  }
  return frames;
}

// Frames from --log when given, otherwise from --scene/scene flags.
std::vector<SensorFrame> loadInput(const std::string& log_path,
                                   const std::string& scene_path,
                                   const SceneFlags& scene_flags,
                                   const SensorFlags& sensor_flags,
                                   const TrajFlags& traj) {
  if (!log_path.empty()) return readFrameLog(log_path).frames;
  sim::Scene scene = scene_path.empty()
                         ? sim::genScene(scene_flags.seed, scene_flags.toSpec())
                         : sim::readSceneFile(scene_path);
  return synthesizeFrames(scene, sensor_flags.toSpec(), traj);
}

// ---------------------------------------------------------------------------
// reporting

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t idx = std::min(
      v.size() - 1, static_cast<size_t>(std::ceil(q * v.size())) - (q > 0.0 ? 1 : 0));
  return v[idx];
}

json timingStats(const std::vector<double>& samples) {
  double sum = 0.0;
  for (double s : samples) sum += s;
  return {{"mean_ms", samples.empty() ? 0.0 : sum / samples.size()},
          {"p50_ms", percentile(samples, 0.50)},
          {"p90_ms", percentile(samples, 0.90)},
          {"p99_ms", percentile(samples, 0.99)}};
}

size_t memoryEstimate(const MapState& state) {
  // Rough: record payload plus hash-slot overhead for both containers and
  // per-record inflation-table entries.
  size_t bytes = state.infSize() * (sizeof(VoxelRecord) + sizeof(VoxelKey) + 16);
  bytes += state.occSize() * (sizeof(VoxelKey) + sizeof(void*));
  for (const auto& [key, rec] : state.infMap()) {
    bytes += (rec->inflates.size() + rec->inflaters.size()) * sizeof(void*);
  }
  return bytes;
}

struct PipelineRun {
  std::vector<UpdateStats> stats;
  std::vector<double> t_total, t_input, t_occ, t_inf, t_ret;
  uint64_t points_total = 0;

  void record(const SensorFrame& frame, const UpdateStats& s) {
    points_total += frame.points.size();
    stats.push_back(s);
    t_total.push_back(s.t_phase.total_ms);
    t_input.push_back(s.t_phase.input_ms);
    t_occ.push_back(s.t_phase.occupancy_ms);
    t_inf.push_back(s.t_phase.inflation_ms);
    t_ret.push_back(s.t_phase.retention_ms);
  }

  json report(const VoxelMap& map) const {
    uint64_t evictions = 0, state_changes = 0;
    for (const UpdateStats& s : stats) {
      evictions += s.n_evictions;
      state_changes += s.n_state_changes;
    }
    return {{"frames", stats.size()},
            {"points_total", points_total},
            {"points_per_frame_mean",
             stats.empty() ? 0.0
                           : static_cast<double>(points_total) / stats.size()},
            {"n_occ", map.occupiedKeys().size()},
            {"n_occ_map", map.occupiedCount()},
            {"n_inf", map.inflatedCount()},
            {"n_records", map.recordCount()},
            {"n_evictions", evictions},
            {"n_state_changes", state_changes},
            {"mem_bytes_est", memoryEstimate(map.state())},
            {"t_tot", timingStats(t_total)},
            {"t_m", timingStats(t_input)},
            {"t_occ", timingStats(t_occ)},
            {"t_inf", timingStats(t_inf)},
            {"t_ret", timingStats(t_ret)}};
  }
};

void emitReport(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << report.dump(2) << "\n";
  }
}

void applyDue(VoxelMap& map, std::vector<ScheduledPatch>& schedule,
              size_t& next_patch, uint64_t frame_index) {
  while (next_patch < schedule.size() &&
         schedule[next_patch].frame <= frame_index) {
    map.setParams(schedule[next_patch].patch);
    ++next_patch;
  }
}

// ---------------------------------------------------------------------------
// subcommands

int cmdReplay(const MapFlags& map_flags, const std::string& log_path,
              const std::string& scene_path, const SceneFlags& scene_flags,
              const SensorFlags& sensor_flags, const TrajFlags& traj,
              const std::string& params_path, const std::string& export_mode,
              const std::string& ply_path, const std::string& report_path) {
  ParamPatch initial;
  std::vector<ScheduledPatch> schedule;
  if (!params_path.empty()) parseParamsFile(params_path, initial, schedule);

  const std::vector<SensorFrame> frames =
      loadInput(log_path, scene_path, scene_flags, sensor_flags, traj);

  VoxelMap map(map_flags.toConfig());
  map.setParams(initial);
  PipelineRun run;
  size_t next_patch = 0;
  for (uint64_t i = 0; i < frames.size(); ++i) {
    applyDue(map, schedule, next_patch, i);
    run.record(frames[i], map.update(frames[i]));
  }

  json report = run.report(map);
  if (!export_mode.empty()) {
    const PlyMode mode = export_mode == "inflated" ? PlyMode::kInflated
                                                   : PlyMode::kOccupied;
    const std::string path = ply_path.empty() ? "map.ply" : ply_path;
    report["ply_vertices"] = exportPly(map.state(), path, mode);
    report["ply_path"] = path;
  }
  emitReport(report, report_path);
  return 0;
}

int cmdShareSim(const MapFlags& map_flags, const std::string& log_path,
                const std::string& scene_path, const SceneFlags& scene_flags,
                const SensorFlags& sensor_flags, const TrajFlags& traj,
                double loss_rate, const std::vector<std::string>& burst_args,
                uint64_t channel_seed, const std::string& report_path) {
  std::vector<sim::BurstSpec> bursts;
  for (const std::string& arg : burst_args) {
    sim::BurstSpec b;
    if (std::sscanf(arg.c_str(), "%lu:%lu", &b.start, &b.length) != 2) {
      throw CLI::ValidationError("bad --burst '" + arg + "', expected START:LENGTH");
    }
    bursts.push_back(b);
  }

  const std::vector<SensorFrame> frames =
      loadInput(log_path, scene_path, scene_flags, sensor_flags, traj);

  const MapConfig cfg = map_flags.toConfig();
  VoxelMap sender(cfg);
  VoxelMap receiver(cfg);
  FrameRing ring(cfg.ring_capacity);

  // One delivery opportunity per sender cycle; a dropped opportunity leaves
  // the outbox intact, a kept one drains and acknowledges it.
  const std::vector<size_t> kept =
      sim::lossyChannelKeptIndices(frames.size(), loss_rate, channel_seed, bursts);
  std::vector<uint8_t> up(frames.size(), 0);
  for (size_t i : kept) up[i] = 1;

  uint64_t raw_bytes = 0, encoded_bytes = 0, frames_delivered = 0;
  for (size_t i = 0; i < frames.size(); ++i) {
    raw_bytes += frames[i].points.size() * 16;  // 16 bytes per raw point
    sender.update(frames[i]);
    ShareFrame share = sender.exportFrame(0);
    encoded_bytes += encodeFrame(share).size();
    ring.push(std::move(share));
    if (up[i]) {
      uint32_t last_seq = 0;
      for (const ShareFrame& f : ring.drain()) {
        receiver.updateShared(f);
        last_seq = f.seq;
        ++frames_delivered;
      }
      ring.acknowledgeUpTo(last_seq);
    }
  }

  const std::vector<VoxelKey> sender_occ = sender.occupiedKeys();
  const std::vector<VoxelKey> receiver_occ = receiver.occupiedKeys();
  std::vector<VoxelKey> common;
  std::set_intersection(sender_occ.begin(), sender_occ.end(),
                        receiver_occ.begin(), receiver_occ.end(),
                        std::back_inserter(common));
  const double retention =
      sender_occ.empty()
          ? 100.0
          : 100.0 * static_cast<double>(common.size()) / sender_occ.size();
  const double reduction =
      raw_bytes == 0
          ? 0.0
          : 100.0 * (1.0 - static_cast<double>(encoded_bytes) / raw_bytes);

  emitReport({{"frames", frames.size()},
              {"frames_delivered", frames_delivered},
              {"raw_point_bytes", raw_bytes},
              {"encoded_bytes", encoded_bytes},
              {"reduction_pct", loss_rate >= 1.0 ? 100.0 : reduction},
              {"sender_n_occ", sender_occ.size()},
              {"receiver_n_occ", receiver_occ.size()},
              {"retention_pct", retention},
              {"ring_capacity", cfg.ring_capacity},
              {"loss_rate", loss_rate}},
             report_path);
  return 0;
}

int cmdGen(const SceneFlags& scene_flags, const SensorFlags& sensor_flags,
           const TrajFlags& traj, const std::string& scene_out,
           const std::string& log_out) {
  const sim::Scene scene = sim::genScene(scene_flags.seed, scene_flags.toSpec());
  if (!scene_out.empty()) sim::writeSceneFile(scene_out, scene);
  if (!log_out.empty()) {
    writeFrameLog(log_out, synthesizeFrames(scene, sensor_flags.toSpec(), traj));
  }
  std::cout << json({{"seed", scene.seed},
                     {"obstacles", scene.obstacles.size()},
                     {"fill_fraction", scene.fill_fraction},
                     {"frames", log_out.empty() ? 0 : traj.frames}})
                   .dump(2)
            << "\n";
  return 0;
}

int cmdExport(const MapFlags& map_flags, const std::string& log_path,
              const std::string& mode, const std::string& out_path) {
  const FrameLogResult log = readFrameLog(log_path);
  VoxelMap map(map_flags.toConfig());
  for (const SensorFrame& frame : log.frames) map.update(frame);
  const PlyMode ply_mode =
      mode == "inflated" ? PlyMode::kInflated : PlyMode::kOccupied;
  const size_t vertices = exportPly(map.state(), out_path, ply_mode);
  std::cout << json({{"ply_path", out_path},
                     {"ply_vertices", vertices},
                     {"mode", mode},
                     {"dropped_nan_points", log.dropped_nan_points}})
                   .dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxel mapping pipeline harness"};
  app.require_subcommand(1);

  MapFlags map_flags;
  SceneFlags scene_flags;
  SensorFlags sensor_flags;
  TrajFlags traj;
  std::string log_path, scene_path, params_path, report_path;
  std::string export_mode, ply_path;

  CLI::App* replay = app.add_subcommand("replay", "Run the pipeline over a frame log or synthetic scene");
  addMapFlags(replay, map_flags);
  addSceneFlags(replay, scene_flags);
  addSensorFlags(replay, sensor_flags);
  addTrajFlags(replay, traj);
  replay->add_option("--log", log_path, "Input frame log (VXPCLOG1)");
  replay->add_option("--scene", scene_path, "Input scene file (overrides scene flags)");
  replay->add_option("--params", params_path, "Params file ('set K V' / 'at N set K V')");
  replay->add_option("--export", export_mode, "Write a PLY: occupied|inflated")
      ->check(CLI::IsMember({"occupied", "inflated"}));
  replay->add_option("--ply", ply_path, "PLY output path (default map.ply)");
  replay->add_option("--report", report_path, "Report path (default stdout)");

  double loss_rate = 0.0;
  uint64_t channel_seed = 7;
  std::vector<std::string> burst_args;
  CLI::App* share = app.add_subcommand("share-sim", "Sender/receiver relay over a lossy channel");
  addMapFlags(share, map_flags);
  addSceneFlags(share, scene_flags);
  addSensorFlags(share, sensor_flags);
  addTrajFlags(share, traj);
  share->add_option("--log", log_path, "Input frame log (VXPCLOG1)");
  share->add_option("--scene", scene_path, "Input scene file (overrides scene flags)");
  share->add_option("--loss-rate", loss_rate, "Per-cycle delivery drop probability [0,1]")
      ->capture_default_str();
  share->add_option("--burst", burst_args, "Outage burst START:LENGTH (repeatable)");
  share->add_option("--channel-seed", channel_seed, "Channel RNG seed")
      ->capture_default_str();
  share->add_option("--report", report_path, "Report path (default stdout)");

  std::string scene_out, log_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a deterministic scene and frame log");
  addSceneFlags(gen, scene_flags);
  addSensorFlags(gen, sensor_flags);
  addTrajFlags(gen, traj);
  gen->add_option("--scene-out", scene_out, "Scene file output path");
  gen->add_option("--log-out", log_out, "Frame log output path");

  std::string exp_mode = "occupied", exp_out = "map.ply";
  CLI::App* exp = app.add_subcommand("export", "Replay a log and export the map as PLY");
  addMapFlags(exp, map_flags);
  exp->add_option("--log", log_path, "Input frame log (VXPCLOG1)")->required();
  exp->add_option("--mode", exp_mode, "occupied|inflated")
      ->check(CLI::IsMember({"occupied", "inflated"}))
      ->capture_default_str();
  exp->add_option("--out", exp_out, "PLY output path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (replay->parsed()) {
      return cmdReplay(map_flags, log_path, scene_path, scene_flags, sensor_flags,
                       traj, params_path, export_mode, ply_path, report_path);
    }
    if (share->parsed()) {
      return cmdShareSim(map_flags, log_path, scene_path, scene_flags,
                         sensor_flags, traj, loss_rate, burst_args, channel_seed,
                         report_path);
    }
    if (gen->parsed()) {
      return cmdGen(scene_flags, sensor_flags, traj, scene_out, log_out);
    }
    if (exp->parsed()) {
      return cmdExport(map_flags, log_path, exp_mode, exp_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
