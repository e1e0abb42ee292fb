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

#ifndef COREBENCH_CORENET_CONFIG_HPP_
#define COREBENCH_CORENET_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corebench/nf_kind.hpp"

namespace corebench {

struct NfConfig {
  NfKind kind = NfKind::AMF;
  std::uint16_t listen_port = 0;
  // Byte-mix rounds per inbound data frame. This is the NF's synthetic
  // service cost; stress contends with it on the NF's work lane.
  std::uint64_t work_units = 0;
  // UDR only: number of pre-provisioned subscriber entries (ue-000000...).
  std::size_t store_size = 0;
  int upstream_timeout_ms = 4000;
};

/// A deployment: one NfConfig per running NF. Also serves as the static
/// port map each NF uses to reach its peers.
struct Topology {
  std::vector<NfConfig> nfs;

  bool has(NfKind kind) const;
  const NfConfig& get(NfKind kind) const;           // throws if absent
  std::optional<std::uint16_t> port_of(NfKind kind) const;

  /// All ten NFs on port_base+1..port_base+10 with a uniform work profile.
  static Topology standard(std::uint16_t port_base, std::uint64_t work_units,
                           std::size_t store_size);

  /// Throws std::invalid_argument on duplicate kinds/ports, or when a full
  /// deployment has work_units == 0 on all of AMF, UDM and UDR (stress
  /// could not interfere with service time).
  void validate() const;

  std::string to_json() const;
  static Topology from_json(const std::string& text);
  static Topology load_file(const std::string& path);
  void save_file(const std::string& path) const;
};

/// Work calibrated so an unstressed registration+session transaction lands
/// in the tens-of-milliseconds range on commodity desktops (byte_mix runs
/// at roughly 10 ns/round; a registration makes 7 work invocations).
inline constexpr std::uint64_t kDefaultWorkUnits = 150'000;
inline constexpr std::size_t kDefaultStoreSize = 1000;

}  // namespace corebench

#endif  // COREBENCH_CORENET_CONFIG_HPP_
