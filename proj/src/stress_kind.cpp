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

#include "corebench/stress_kind.hpp"

namespace corebench {

std::string_view to_string(StressKind kind) {
  switch (kind) {
    case StressKind::Cpu:
      return "CPU";
    case StressKind::Memory:
      return "Memory";
    case StressKind::CpuMemory:
      return "CpuMemory";
  }
  return "?";
}

std::optional<StressKind> parse_stress_kind(std::string_view name) {
  if (name == "CPU" || name == "cpu" || name == "Cpu") return StressKind::Cpu;
  if (name == "Memory" || name == "memory" || name == "MEM" || name == "mem") {
    return StressKind::Memory;
  }
  if (name == "CpuMemory" || name == "cpumemory" || name == "CPU+Memory" ||
      name == "cpu+memory" || name == "cpu_memory") {
    return StressKind::CpuMemory;
  }
  return std::nullopt;
}

}  // namespace corebench
