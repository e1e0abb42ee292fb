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

#include "corebench/corenet/work.hpp"

namespace corebench {

std::uint64_t byte_mix(std::span<const std::uint8_t> payload,
                       std::uint64_t rounds) {
  // FNV-1a seed over the payload.
  std::uint64_t state = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : payload) {
    state = (state ^ b) * 0x100000001b3ULL;
  }
  const std::size_t n = payload.size();
  for (std::uint64_t i = 0; i < rounds; ++i) {
    // splitmix-style avalanche plus a data-dependent payload read; the
    // load keeps the loop from collapsing under optimization.
    state ^= state >> 33;
    state *= 0xff51afd7ed558ccdULL;
    state ^= state >> 29;
    if (n != 0) state += payload[static_cast<std::size_t>(state % n)];
  }
  return state;
}

}  // namespace corebench
