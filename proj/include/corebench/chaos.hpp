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

#ifndef COREBENCH_CHAOS_HPP_
#define COREBENCH_CHAOS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "corebench/corenet/config.hpp"
#include "corebench/nf_kind.hpp"
#include "corebench/stress_kind.hpp"

namespace corebench {

/// One stress profile applied to one target NF. Field presence follows the
/// kind: cpu_load_pct is meaningful for CPU kinds, memory_mib for Memory
/// kinds; the combined kind uses both.
struct StressScenario {
  StressKind kind = StressKind::Cpu;
  double cpu_load_pct = 50.0;
  std::size_t memory_mib = 512;
  double duration_s = 20.0;
  NfKind target = NfKind::AMF;

  void validate() const;  // throws std::invalid_argument
};

struct WorkloadWindow {
  std::string id;
  StressScenario scenario;
  std::int64_t start_wall_ns = 0;
  std::int64_t start_mono_ns = 0;
  std::int64_t end_wall_ns = 0;
  std::int64_t end_mono_ns = 0;
  // False when the control channel was unreachable or the stop handshake
  // failed; the merge step excludes such windows from analysis.
  bool realized = false;
};

/// Starts the scenario's stress inside the target NF process via its
/// control channel, holds it for duration_s, releases it, and returns the
/// realized window with start/end timestamps in both clock domains.
WorkloadWindow inject(const StressScenario& scenario,
                      std::uint16_t control_port);

struct ChaosPlan {
  std::vector<NfKind> targets;
  std::vector<StressKind> kinds{StressKind::Cpu, StressKind::Memory,
                                StressKind::CpuMemory};
  int repetitions = 1;
  double duration_s = 20.0;
  double cooldown_s = 20.0;  // idle gap after every window
  double cpu_load_pct = 50.0;
  std::size_t memory_mib = 512;
};

/// Total wall time the plan occupies: windows plus cooldowns.
double plan_span_s(const ChaosPlan& plan);

/// Target-major sequential execution: for each target NF, each kind,
/// `repetitions` times, separated by cooldown_s gaps. Unrealized windows
/// (unreachable targets) are recorded and the plan continues.
std::vector<WorkloadWindow> run_plan(const ChaosPlan& plan,
                                     const Topology& topo);

void write_windows_jsonl(const std::string& path,
                         const std::vector<WorkloadWindow>& windows);
std::vector<WorkloadWindow> read_windows_jsonl(const std::string& path);

}  // namespace corebench

#endif  // COREBENCH_CHAOS_HPP_
