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

#ifndef COREBENCH_TELEMETRY_CAPTURE_HPP_
#define COREBENCH_TELEMETRY_CAPTURE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "corebench/nf_kind.hpp"

namespace corebench {

// The capture-backend dichotomy mirrors kernel vs user-space sniffing as a
// copy-count and process-boundary difference: InlineTap writes each frame
// once into a ring shared with the collector; ExternalObserver sends each
// frame over an extra socket hop to the collector process, which re-parses
// it. Both self-measure the CPU and buffer cost attributable to capture.

enum class CaptureBackend {
  InlineTap,
  ExternalObserver,
};

std::string_view to_string(CaptureBackend b);

struct PacketRecord {
  std::int64_t ts_ns = 0;
  std::string src_nf;  // NF name, or "UE" for sensor-originated frames
  std::string dst_nf;
  std::uint32_t length_bytes = 0;
  std::string payload_hex;  // lowercase hex of the frame body
};

struct CaptureStats {
  CaptureBackend backend = CaptureBackend::InlineTap;
  std::vector<double> cpu_pct_samples;  // capture-path CPU per interval
  std::vector<std::uint64_t> mem_bytes_samples;  // capture buffer footprint
  std::uint64_t frames_captured = 0;
  std::uint64_t frames_dropped = 0;

  double median_cpu_pct() const;
  std::string to_json() const;
};

struct CaptureResult {
  std::vector<PacketRecord> records;
  CaptureStats stats;
};

struct CaptureEndpoint {
  NfKind kind = NfKind::AMF;
  std::uint16_t port = 0;
};

struct CaptureOptions {
  std::size_t ring_bytes = 8 << 20;
  std::uint16_t observer_port = 0;  // 0 = ring name port base - 1 convention
  int sample_interval_ms = 1000;
  std::string ring_name;  // default: unique per pid
};

/// Collector running in the harness process (a separate process from every
/// NF). start() arms the taps in each NF via CAPTURE_START; stop() disarms
/// them, drains outstanding frames and returns the feed plus overhead stats.
class CaptureSession {
 public:
  CaptureSession();
  ~CaptureSession();
  CaptureSession(CaptureSession&&) noexcept;
  CaptureSession& operator=(CaptureSession&&) noexcept;

  static CaptureSession start(CaptureBackend backend,
                              std::vector<CaptureEndpoint> nfs,
                              const CaptureOptions& opts);

  CaptureResult stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// JSON Lines, one PacketRecord per line.
void write_packet_feed_jsonl(const std::string& path,
                             const std::vector<PacketRecord>& records);
std::vector<PacketRecord> read_packet_feed_jsonl(const std::string& path);

}  // namespace corebench

#endif  // COREBENCH_TELEMETRY_CAPTURE_HPP_
