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

#ifndef COREBENCH_TELEMETRY_MONITOR_HPP_
#define COREBENCH_TELEMETRY_MONITOR_HPP_

#include <sys/types.h>

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "corebench/nf_kind.hpp"

namespace corebench {

struct ResourceSample {
  std::int64_t ts_ns = 0;  // monotonic, same domain as windows/samples
  NfKind nf = NfKind::AMF;
  double cpu_pct = 0.0;  // % of one core over the sampling interval
  std::uint64_t rss_bytes = 0;
  std::uint64_t net_rx_bytes = 0;  // cumulative, NF-counted socket bytes
  std::uint64_t net_tx_bytes = 0;
  bool alive = true;  // false on the final sample of an exited NF
};

/// Process CPU time (utime+stime) in ns; -1 when the pid is gone.
std::int64_t proc_cpu_ns(pid_t pid);
/// Resident set size in bytes; 0 when the pid is gone.
std::uint64_t proc_rss_bytes(pid_t pid);

struct MonitorTarget {
  NfKind kind = NfKind::AMF;
  pid_t pid = -1;
  std::uint16_t port = 0;  // for the STATS_GET net counters
};

/// Samples each target every interval_ms: /proc CPU deltas and RSS plus the
/// NF's own socket byte counters fetched over the control channel. An NF
/// that exits gets one final sample flagged alive=false; the stream
/// continues for the others.
class ResourceMonitor {
 public:
  ~ResourceMonitor();
  void start(std::vector<MonitorTarget> targets, int interval_ms = 1000);
  std::vector<ResourceSample> stop();
  bool running() const { return running_.load(); }

 private:
  void loop();

  std::vector<MonitorTarget> targets_;
  int interval_ms_ = 1000;
  std::thread thread_;
  std::atomic<bool> stop_flag_{false};
  std::atomic<bool> running_{false};
  std::vector<ResourceSample> samples_;
};

/// CSV with header ts_ns,nf,cpu_pct,rss_bytes,net_rx,net_tx.
void write_resource_csv(const std::string& path,
                        const std::vector<ResourceSample>& samples);

}  // namespace corebench

#endif  // COREBENCH_TELEMETRY_MONITOR_HPP_
