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

#ifndef COREBENCH_CORENET_STRESS_HPP_
#define COREBENCH_CORENET_STRESS_HPP_

#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>

#include "corebench/corenet/work.hpp"

namespace corebench {

struct StressParams {
  bool cpu = false;
  double cpu_load_pct = 50.0;
  bool memory = false;
  std::size_t memory_mib = 512;
  // Safety stop in case the injector dies without sending STRESS_STOP.
  std::int64_t max_duration_s = 0;
};

/// In-process stress workers, the pod-scoped stress analogue. The CPU
/// worker busy-spins for cpu_load_pct% of every 100 ms quantum while
/// holding the NF work lane; the memory worker keeps memory_mib MiB
/// resident and touches every page once per second (also through the
/// lane, since page touching spends the NF's CPU share too).
class StressController {
 public:
  explicit StressController(WorkLane& lane) : lane_(lane) {}
  ~StressController() { stop(); }

  void start(const StressParams& params);
  void stop();

  bool active() const { return active_.load(std::memory_order_relaxed); }
  std::int64_t busy_ns() const {
    return busy_ns_.load(std::memory_order_relaxed);
  }
  std::uint64_t touch_passes() const {
    return touch_passes_.load(std::memory_order_relaxed);
  }
  std::size_t stress_bytes() const {
    return stress_bytes_.load(std::memory_order_relaxed);
  }

  static constexpr std::int64_t kQuantumNs = 100'000'000;  // 100 ms

 private:
  void cpu_loop(double load_pct, std::int64_t deadline_ns);
  void memory_loop(std::size_t bytes, std::int64_t deadline_ns);

  WorkLane& lane_;
  std::mutex mu_;
  std::thread cpu_thread_;
  std::thread mem_thread_;
  std::atomic<bool> stop_flag_{false};
  std::atomic<bool> active_{false};
  std::atomic<std::int64_t> busy_ns_{0};
  std::atomic<std::uint64_t> touch_passes_{0};
  std::atomic<std::size_t> stress_bytes_{0};
};

}  // namespace corebench

#endif  // COREBENCH_CORENET_STRESS_HPP_
