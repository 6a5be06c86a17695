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

#ifndef VXMAP_SHARE_HPP_
#define VXMAP_SHARE_HPP_

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "vxmap/share_frame.hpp"

namespace vxmap {

class DecodeError : public std::runtime_error {
 public:
  DecodeError(size_t offset, const std::string& what)
      : std::runtime_error("decode error at byte " + std::to_string(offset) +
                           ": " + what),
        offset(offset) {}
  size_t offset;
};

/// Wire layout, little-endian:
///   magic "VXM1" (0x56584D31 big-endian byte order on the wire),
///   sender_id u32, seq u32, stamp_us u64, res f32, key_count u32,
///   first key as 3 x i32, remaining keys as per-component deltas in
///   zig-zag varint encoding (sorted keys keep deltas small).
std::vector<uint8_t> encodeFrame(const ShareFrame& frame);

/// Exact inverse of encodeFrame. Rejects bad magic, truncation, trailing
/// bytes, and non-finite or non-positive resolutions.
ShareFrame decodeFrame(const std::vector<uint8_t>& bytes);

/// Fixed-capacity outbox. Holds the most recent frames; pushing into a
/// full ring overwrites the oldest. Tolerates connection loss: frames stay
/// until acknowledged, a drain is non-destructive.
class FrameRing {
 public:
  explicit FrameRing(size_t capacity);

  /// Stores a frame; seq must exceed every stored seq.
  void push(ShareFrame frame);

  /// All held frames, oldest first. Does not remove them.
  std::vector<ShareFrame> drain() const;

  /// Transport acknowledgment: drops every frame with seq <= `seq`.
  void acknowledgeUpTo(uint32_t seq);

  size_t size() const { return slots_.size(); }
  size_t capacity() const { return capacity_; }
  bool empty() const { return slots_.empty(); }

 private:
  size_t capacity_;
  std::deque<ShareFrame> slots_;
};

/// Length-prefixed share-frame log container (magic "VXMLOG1\0", then
/// u32-LE byte length + encoded frame, repeated).
void writeShareLog(const std::string& path, const std::vector<ShareFrame>& frames);
std::vector<ShareFrame> readShareLog(const std::string& path);

}  // namespace vxmap

#endif  // VXMAP_SHARE_HPP_
