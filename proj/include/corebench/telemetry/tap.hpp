// Copyright 2026 The corebench Authors.
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

#ifndef COREBENCH_TELEMETRY_TAP_HPP_
#define COREBENCH_TELEMETRY_TAP_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "corebench/net.hpp"

namespace corebench {

// Mirrored-frame record layout, shared by the shm ring and the observer
// stream: u32 record length (excluding itself), i64 capture timestamp
// (monotonic ns), u8 src, u8 dst, frame body bytes. src/dst are NfKind
// indices; 255 marks the UE (sensor) side.

inline constexpr std::uint8_t kUePeerId = 255;

struct MirrorRecord {
  std::int64_t ts_ns = 0;
  std::uint8_t src = 0;
  std::uint8_t dst = 0;
  std::vector<std::uint8_t> body;
};

/// Appends the on-wire form of one record to `out`.
void append_mirror_record(std::vector<std::uint8_t>& out, std::int64_t ts_ns,
                          std::uint8_t src, std::uint8_t dst,
                          std::span<const std::uint8_t> body);

/// Incremental parser for a byte stream of mirror records (observer side).
class MirrorStreamParser {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Extracts all complete records accumulated so far.
  std::vector<MirrorRecord> take();

 private:
  std::vector<std::uint8_t> buf_;
  std::vector<MirrorRecord> done_;
};

/// Multi-producer byte ring in POSIX shared memory. The collector creates
/// it; NF processes open it and push mirror records under a process-shared
/// robust mutex. Writers never block: bounded trylock, drop on full.
class ShmRing {
 public:
  static ShmRing create(const std::string& name, std::size_t data_bytes);
  static ShmRing open_existing(const std::string& name);
  ShmRing(ShmRing&&) noexcept;
  ShmRing& operator=(ShmRing&&) noexcept;
  ~ShmRing();

  bool try_push(std::span<const std::uint8_t> record);
  std::vector<MirrorRecord> pop_all();

  std::uint64_t dropped() const;
  std::size_t capacity() const;
  const std::string& name() const { return name_; }

 private:
  ShmRing() = default;
  struct Hdr;
  Hdr* hdr_ = nullptr;
  std::uint8_t* data_ = nullptr;
  std::size_t map_bytes_ = 0;
  std::string name_;
  bool owner_ = false;
};

struct TapStats {
  std::uint64_t frames = 0;
  std::uint64_t dropped = 0;
  std::int64_t cpu_ns = 0;     // self-measured capture-path CPU time
  std::uint64_t buf_bytes = 0; // capture-path buffer footprint
};

/// The NF-side mirror point. Inline mode copies each frame once into the
/// shared ring; observer mode forwards a copy over an extra loopback socket
/// to the observer process. Either way mirror() never blocks the data path.
class CaptureTap {
 public:
  void configure_inline(const std::string& ring_name);
  void configure_observer(std::uint16_t observer_port, int connect_timeout_ms);
  void disable();
  bool active() const;

  void mirror(std::uint8_t src, std::uint8_t dst,
              std::span<const std::uint8_t> body) noexcept;

  TapStats stats() const;
  /// Socket bytes the observer path has written (counted into NF net_tx).
  std::uint64_t observer_bytes_sent() const {
    return bytes_sent_.load(std::memory_order_relaxed);
  }

 private:
  enum class Mode { Off, Inline, Observer };
  void flush_pending_locked();

  mutable std::mutex mu_;
  Mode mode_ = Mode::Off;
  std::unique_ptr<ShmRing> ring_;
  Socket observer_sock_;
  std::vector<std::uint8_t> pending_;
  std::size_t pending_rd_ = 0;
  std::atomic<std::uint64_t> frames_{0};
  std::atomic<std::uint64_t> dropped_{0};
  std::atomic<std::int64_t> cpu_ns_{0};
  std::atomic<std::uint64_t> bytes_sent_{0};
};

}  // namespace corebench

#endif  // COREBENCH_TELEMETRY_TAP_HPP_
