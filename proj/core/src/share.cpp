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

#include "vxmap/share.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace vxmap {
namespace {

constexpr uint8_t kMagic[4] = {'V', 'X', 'M', '1'};
constexpr char kLogMagic[8] = {'V', 'X', 'M', 'L', 'O', 'G', '1', '\0'};
constexpr size_t kHeaderSize = 28;

void putU32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

void putU64(std::vector<uint8_t>& out, uint64_t v) {
  putU32(out, static_cast<uint32_t>(v));
  putU32(out, static_cast<uint32_t>(v >> 32));
}

void putVarint(std::vector<uint8_t>& out, uint32_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t zigzag(int32_t v) {
  return (static_cast<uint32_t>(v) << 1) ^ static_cast<uint32_t>(v >> 31);
}

int32_t unzigzag(uint32_t v) {
  return static_cast<int32_t>((v >> 1) ^ (~(v & 1) + 1));
}

class Reader {
 public:
  explicit Reader(const std::vector<uint8_t>& bytes) : bytes_(bytes) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

  void need(size_t n, const char* what) const {
    if (remaining() < n) throw DecodeError(pos_, std::string("truncated ") + what);
  }

  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = static_cast<uint32_t>(bytes_[pos_]) |
                 static_cast<uint32_t>(bytes_[pos_ + 1]) << 8 |
                 static_cast<uint32_t>(bytes_[pos_ + 2]) << 16 |
                 static_cast<uint32_t>(bytes_[pos_ + 3]) << 24;
    pos_ += 4;
    return v;
  }

  uint64_t u64(const char* what) {
    const uint64_t lo = u32(what);
    const uint64_t hi = u32(what);
    return lo | hi << 32;
  }

  float f32(const char* what) {
    const uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  uint32_t varint(const char* what) {
    uint32_t v = 0;
    for (int shift = 0; shift < 35; shift += 7) {
      need(1, what);
      const uint8_t b = bytes_[pos_++];
      v |= static_cast<uint32_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
    }
    throw DecodeError(pos_, std::string("overlong varint in ") + what);
  }

 private:
  const std::vector<uint8_t>& bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> encodeFrame(const ShareFrame& frame) {
  std::vector<uint8_t> out;
  out.reserve(kHeaderSize + 12 + frame.keys.size() * 3);
  for (uint8_t b : kMagic) out.push_back(b);
  putU32(out, frame.sender_id);
  putU32(out, frame.seq);
  putU64(out, frame.stamp_us);
  uint32_t res_bits;
  std::memcpy(&res_bits, &frame.res, sizeof res_bits);
  putU32(out, res_bits);
  putU32(out, static_cast<uint32_t>(frame.keys.size()));
  if (!frame.keys.empty()) {
    const VoxelKey& first = frame.keys.front();
    putU32(out, static_cast<uint32_t>(first.x));
    putU32(out, static_cast<uint32_t>(first.y));
    putU32(out, static_cast<uint32_t>(first.z));
    for (size_t i = 1; i < frame.keys.size(); ++i) {
      const VoxelKey& prev = frame.keys[i - 1];
      const VoxelKey& cur = frame.keys[i];
      putVarint(out, zigzag(cur.x - prev.x));
      putVarint(out, zigzag(cur.y - prev.y));
      putVarint(out, zigzag(cur.z - prev.z));
    }
  }
  return out;
}

ShareFrame decodeFrame(const std::vector<uint8_t>& bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DecodeError(0, "bad magic");
  }
  ShareFrame frame;
  (void)r.u32("magic");
  frame.sender_id = r.u32("sender_id");
  frame.seq = r.u32("seq");
  frame.stamp_us = r.u64("stamp");
  frame.res = r.f32("res");
  if (!std::isfinite(frame.res) || frame.res <= 0.0f) {
    throw DecodeError(r.offset() - 8, "resolution not finite and positive");
  }
  const uint32_t count = r.u32("key_count");
  if (count > 0) {
    frame.keys.reserve(count);
    VoxelKey k{static_cast<int32_t>(r.u32("first key")),
               static_cast<int32_t>(r.u32("first key")),
               static_cast<int32_t>(r.u32("first key"))};
    frame.keys.push_back(k);
    for (uint32_t i = 1; i < count; ++i) {
      k.x += unzigzag(r.varint("key delta"));
      k.y += unzigzag(r.varint("key delta"));
      k.z += unzigzag(r.varint("key delta"));
      frame.keys.push_back(k);
    }
  }
  if (r.remaining() != 0) {
    throw DecodeError(r.offset(), "trailing bytes after frame");
  }
  return frame;
}

FrameRing::FrameRing(size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("FrameRing capacity must be >= 1");
}

void FrameRing::push(ShareFrame frame) {
  if (!slots_.empty() && frame.seq <= slots_.back().seq) {
    throw std::invalid_argument("FrameRing: non-monotonic sequence number");
  }
  if (slots_.size() == capacity_) slots_.pop_front();
  slots_.push_back(std::move(frame));
}

std::vector<ShareFrame> FrameRing::drain() const {
  return {slots_.begin(), slots_.end()};
}

void FrameRing::acknowledgeUpTo(uint32_t seq) {
  while (!slots_.empty() && slots_.front().seq <= seq) slots_.pop_front();
}

void writeShareLog(const std::string& path, const std::vector<ShareFrame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kLogMagic, sizeof kLogMagic);
  for (const ShareFrame& f : frames) {
    const std::vector<uint8_t> bytes = encodeFrame(f);
    std::vector<uint8_t> len;
    putU32(len, static_cast<uint32_t>(bytes.size()));
    out.write(reinterpret_cast<const char*>(len.data()), 4);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

std::vector<ShareFrame> readShareLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || std::memcmp(magic, kLogMagic, 8) != 0) {
    throw std::runtime_error(path + ": bad share-log magic");
  }
  std::vector<ShareFrame> frames;
  for (;;) {
    uint8_t lenb[4];
    in.read(reinterpret_cast<char*>(lenb), 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4) throw std::runtime_error(path + ": truncated frame length");
    const uint32_t len = static_cast<uint32_t>(lenb[0]) | lenb[1] << 8 |
                         lenb[2] << 16 | static_cast<uint32_t>(lenb[3]) << 24;
    std::vector<uint8_t> bytes(len);
    in.read(reinterpret_cast<char*>(bytes.data()), len);
    if (static_cast<uint32_t>(in.gcount()) != len) {
      throw std::runtime_error(path + ": truncated frame body");
    }
    frames.push_back(decodeFrame(bytes));
  }
  return frames;
}

}  // namespace vxmap
