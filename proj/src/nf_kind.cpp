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

#include "corebench/nf_kind.hpp"

#include <algorithm>
#include <cctype>

namespace corebench {

namespace {
constexpr std::array<std::string_view, kNfCount> kNames = {
    "AMF", "SMF", "AUSF", "UDM", "UDR", "NRF", "PCF", "NSSF", "UPF", "CHF",
};
}  // namespace

std::string_view to_string(NfKind kind) {
  return kNames[nf_index(kind)];
}

std::optional<NfKind> parse_nf_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (std::size_t i = 0; i < kNfCount; ++i) {
    if (upper == kNames[i]) return static_cast<NfKind>(i);
  }
  return std::nullopt;
}

}  // namespace corebench
