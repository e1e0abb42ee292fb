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

#ifndef COREBENCH_NF_KIND_HPP_
#define COREBENCH_NF_KIND_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace corebench {

/// The ten control-plane network functions of the simulated core.
enum class NfKind : std::uint8_t {
  AMF = 0,
  SMF,
  AUSF,
  UDM,
  UDR,
  NRF,
  PCF,
  NSSF,
  UPF,
  CHF,
};

inline constexpr std::size_t kNfCount = 10;

inline constexpr std::array<NfKind, kNfCount> kAllNfKinds = {
    NfKind::AMF, NfKind::SMF,  NfKind::AUSF, NfKind::UDM, NfKind::UDR,
    NfKind::NRF, NfKind::PCF,  NfKind::NSSF, NfKind::UPF, NfKind::CHF,
};

std::string_view to_string(NfKind kind);

/// Parses "AMF", "amf", ... Returns nullopt for unknown names.
std::optional<NfKind> parse_nf_kind(std::string_view name);

inline std::size_t nf_index(NfKind kind) {
  return static_cast<std::size_t>(kind);
}

/// Default port assignment: base + 1 + enum index (base itself stays free
/// for auxiliary listeners such as the capture observer).
inline std::uint16_t default_nf_port(NfKind kind, std::uint16_t port_base) {
  return static_cast<std::uint16_t>(port_base + 1 + nf_index(kind));
}

inline constexpr std::uint16_t kDefaultPortBase = 7700;

}  // namespace corebench

#endif  // COREBENCH_NF_KIND_HPP_
