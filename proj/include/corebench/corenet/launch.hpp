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

#ifndef COREBENCH_CORENET_LAUNCH_HPP_
#define COREBENCH_CORENET_LAUNCH_HPP_

#include <sys/types.h>

#include <cstdint>
#include <string>
#include <vector>

#include "corebench/corenet/config.hpp"
#include "corebench/nf_kind.hpp"

namespace corebench {

/// Locates the corebench-nfd binary: $COREBENCH_NFD if set, otherwise next
/// to the current executable. Throws if neither resolves.
std::string find_nfd_binary();

struct NfProcess {
  NfKind kind = NfKind::AMF;
  pid_t pid = -1;
  std::uint16_t port = 0;
};

struct LaunchOptions {
  int ready_timeout_ms = 8000;
  std::string nfd_path;  // empty = find_nfd_binary()
};

/// Spawns one NF process and waits for its READY line plus a PONG on the
/// wire. Throws std::runtime_error with the child's diagnostic on failure
/// (e.g. "port in use: 7701").
NfProcess start_nf(const NfConfig& cfg, const Topology& topo,
                   const LaunchOptions& opts = {});

/// A running deployment of NF processes. Owns their lifetimes; the
/// destructor force-kills whatever is still alive.
class CoreHandle {
 public:
  CoreHandle() = default;
  ~CoreHandle();
  CoreHandle(CoreHandle&&) = default;
  CoreHandle& operator=(CoreHandle&&) = default;
  CoreHandle(const CoreHandle&) = delete;
  CoreHandle& operator=(const CoreHandle&) = delete;

  /// Boots every NF in the topology (NRF first so startup registration
  /// lands), then confirms each answers PING.
  static CoreHandle up(const Topology& topo, const LaunchOptions& opts = {});

  /// Ensures ue-000000 .. ue-(count-1) exist in the UDR store.
  void provision(std::size_t ue_count, const std::string& prefix = "ue-");

  /// Graceful stop: SHUTDOWN frame, then SIGTERM, then SIGKILL.
  void stop();
  void stop_nf(NfKind kind);
  /// Immediate SIGKILL, for fault injection.
  void kill_nf(NfKind kind);

  bool alive(NfKind kind) const;
  const std::vector<NfProcess>& nfs() const { return procs_; }
  const Topology& topology() const { return topo_; }

  /// Runtime descriptor (kind/port/pid per NF) for out-of-process tools.
  std::string descriptor_json() const;
  void save_descriptor(const std::string& path) const;

 private:
  Topology topo_;
  std::vector<NfProcess> procs_;
};

/// Loads a descriptor written by save_descriptor.
std::vector<NfProcess> load_descriptor(const std::string& path);

}  // namespace corebench

#endif  // COREBENCH_CORENET_LAUNCH_HPP_
