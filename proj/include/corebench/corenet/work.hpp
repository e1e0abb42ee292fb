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

#ifndef COREBENCH_CORENET_WORK_HPP_
#define COREBENCH_CORENET_WORK_HPP_

#include <cstdint>
#include <mutex>
#include <span>

namespace corebench {

/// Deterministic byte-mixing function: `rounds` mixing rounds over a state
/// seeded from the payload, each round reading one payload byte. Pure; the
/// same (payload, rounds) always yields the same digest.
std::uint64_t byte_mix(std::span<const std::uint8_t> payload,
                       std::uint64_t rounds);

/// The NF's single CPU execution lane. All CPU-bound activity in an NF
/// process (frame work, the stress duty cycle, the memory-touch pass) runs
/// holding this lane, which is what makes in-process stress contend with
/// service time the way pod-scoped stress contends with a one-CPU quota,
/// independent of how many host cores exist. Connection handling and I/O
/// stay concurrent.
class WorkLane {
 public:
  std::unique_lock<std::mutex> acquire() {
    return std::unique_lock<std::mutex>(mu_);
  }

  std::uint64_t run(std::span<const std::uint8_t> payload,
                    std::uint64_t rounds) {
    if (rounds == 0) return byte_mix(payload, 0);
    auto lk = acquire();
    return byte_mix(payload, rounds);
  }

 private:
  std::mutex mu_;
};

}  // namespace corebench

#endif  // COREBENCH_CORENET_WORK_HPP_
