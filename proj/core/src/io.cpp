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

#include "vxmap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vxmap {
namespace {

constexpr char kLogMagic[8] = {'V', 'X', 'P', 'C', 'L', 'O', 'G', '1'};

void putF64(std::ofstream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

void putF32(std::ofstream& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  uint8_t buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<uint8_t>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

void putU32(std::ofstream& out, uint32_t v) {
  uint8_t buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

class LogReader {
 public:
  LogReader(std::ifstream& in, const std::string& path) : in_(in), path_(path) {}

  bool atEof() {
    in_.peek();
    return in_.eof();
  }

  void read(void* dst, size_t n, size_t frame_index, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw std::runtime_error(path_ + ": truncated " + what + " in frame " +
                               std::to_string(frame_index));
    }
  }

  double f64(size_t frame, const char* what) {
    uint8_t buf[8];
    read(buf, 8, frame, what);
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(buf[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  float f32(size_t frame, const char* what) {
    uint8_t buf[4];
    read(buf, 4, frame, what);
    uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<uint32_t>(buf[i]) << (8 * i);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  uint32_t u32(size_t frame, const char* what) {
    uint8_t buf[4];
    read(buf, 4, frame, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[i]) << (8 * i);
    return v;
  }

 private:
  std::ifstream& in_;
  const std::string& path_;
};

}  // namespace

void writeFrameLog(const std::string& path, const std::vector<SensorFrame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kLogMagic, sizeof kLogMagic);
  for (const SensorFrame& f : frames) {
    putF64(out, f.stamp);
    putF64(out, f.origin.x);
    putF64(out, f.origin.y);
    putF64(out, f.origin.z);
    putU32(out, static_cast<uint32_t>(f.points.size()));
    for (const Vec3& p : f.points) {
      putF32(out, static_cast<float>(p.x));
      putF32(out, static_cast<float>(p.y));
      putF32(out, static_cast<float>(p.z));
    }
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

FrameLogResult readFrameLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || std::memcmp(magic, kLogMagic, 8) != 0) {
    throw std::runtime_error(path + ": bad frame-log magic at byte 0");
  }
  FrameLogResult result;
  LogReader r(in, path);
  for (size_t frame_index = 0; !r.atEof(); ++frame_index) {
    SensorFrame frame;
    frame.stamp = r.f64(frame_index, "stamp");
    frame.origin.x = r.f64(frame_index, "origin");
    frame.origin.y = r.f64(frame_index, "origin");
    frame.origin.z = r.f64(frame_index, "origin");
    const uint32_t count = r.u32(frame_index, "point count");
    frame.points.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
      const float x = r.f32(frame_index, "point");
      const float y = r.f32(frame_index, "point");
      const float z = r.f32(frame_index, "point");
      if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        ++result.dropped_nan_points;
        continue;
      }
      frame.points.push_back({x, y, z});
    }
    result.frames.push_back(std::move(frame));
  }
  return result;
}

size_t exportPly(const MapState& map, const std::string& path, PlyMode mode) {
  std::vector<VoxelKey> keys;
  if (mode == PlyMode::kOccupied) {
    for (const auto& [key, rec] : map.occMap()) {
      if (rec->state == OccState::Occ) keys.push_back(key);
    }
  } else {
    for (const auto& [key, rec] : map.infMap()) {
      if (rec->inflation_count > 0) keys.push_back(key);
    }
  }
  std::sort(keys.begin(), keys.end());

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "ply\n"
      << "format ascii 1.0\n"
      << "element vertex " << keys.size() << "\n"
      << "property float x\n"
      << "property float y\n"
      << "property float z\n"
      << "end_header\n";
  out.precision(9);
  for (const VoxelKey& key : keys) {
    const Vec3 c = keyToCenter(key, map.cfg());
    out << c.x << " " << c.y << " " << c.z << "\n";
  }
  if (!out) throw std::runtime_error("write failure on " + path);
  return keys.size();
}

}  // namespace vxmap
