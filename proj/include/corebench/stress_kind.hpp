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

#ifndef COREBENCH_STRESS_KIND_HPP_
#define COREBENCH_STRESS_KIND_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace corebench {

/// The three stress treatments applied to a network function.
enum class StressKind : std::uint8_t {
  Cpu = 0,
  Memory,
  CpuMemory,
};

inline constexpr std::array<StressKind, 3> kAllStressKinds = {
    StressKind::Cpu, StressKind::Memory, StressKind::CpuMemory};

std::string_view to_string(StressKind kind);
std::optional<StressKind> parse_stress_kind(std::string_view name);

}  // namespace corebench

#endif  // COREBENCH_STRESS_KIND_HPP_
