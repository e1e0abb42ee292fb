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

#include "corebench/corenet/stress.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <numeric>

#include "corebench/time_util.hpp"

namespace corebench {

void StressController::start(const StressParams& params) {
  std::lock_guard lk(mu_);
  // Replace any running stress.
  stop_flag_.store(true);
  if (cpu_thread_.joinable()) cpu_thread_.join();
  if (mem_thread_.joinable()) mem_thread_.join();
  stop_flag_.store(false);
  busy_ns_.store(0);
  touch_passes_.store(0);

  const std::int64_t deadline =
      params.max_duration_s > 0
          ? now_mono_ns() + params.max_duration_s * 1'000'000'000
          : 0;
  if (params.cpu) {
    const double load = std::clamp(params.cpu_load_pct, 0.1, 100.0);
    cpu_thread_ = std::thread([this, load, deadline] { cpu_loop(load, deadline); });
  }
  if (params.memory) {
    mem_thread_ = std::thread([this, bytes = params.memory_mib << 20, deadline] {
      memory_loop(bytes, deadline);
    });
  }
  active_.store(params.cpu || params.memory);
}

void StressController::stop() {
  std::lock_guard lk(mu_);
  stop_flag_.store(true);
  if (cpu_thread_.joinable()) cpu_thread_.join();
  if (mem_thread_.joinable()) mem_thread_.join();
  stop_flag_.store(false);
  active_.store(false);
}

void StressController::cpu_loop(double load_pct, std::int64_t deadline_ns) {
  const auto busy_per_quantum =
      static_cast<std::int64_t>(kQuantumNs * load_pct / 100.0);
  // The busy budget is spent in short lane slices with handoff gaps, the
  // way an OS scheduler time-slices a stressor against the service on a
  // shared CPU quota. A monolithic 50 ms hold would let entire
  // transactions slip into the idle half untouched.
  constexpr std::int64_t kSliceNs = 5'000'000;
  constexpr std::int64_t kHandoffNs = 100'000;

  std::int64_t quantum_start = now_mono_ns();
  volatile std::uint64_t sink = 0;
  while (!stop_flag_.load(std::memory_order_relaxed)) {
    if (deadline_ns != 0 && quantum_start >= deadline_ns) break;
    std::int64_t spent = 0;
    while (spent < busy_per_quantum &&
           !stop_flag_.load(std::memory_order_relaxed)) {
      const std::int64_t want = std::min(kSliceNs, busy_per_quantum - spent);
      {
        auto lane = lane_.acquire();
        const std::int64_t slice_from = now_mono_ns();
        const std::int64_t slice_until = slice_from + want;
        std::int64_t t = slice_from;
        while (t < slice_until &&
               !stop_flag_.load(std::memory_order_relaxed)) {
          for (int i = 0; i < 2000; ++i) {
            sink = sink * 6364136223846793005ULL + 1442695040888963407ULL;
          }
          t = now_mono_ns();
        }
        spent += t - slice_from;
        busy_ns_.fetch_add(t - slice_from);
      }
      sleep_until_mono_ns(now_mono_ns() + kHandoffNs);
    }
    std::int64_t next = quantum_start + kQuantumNs;
    const std::int64_t now = now_mono_ns();
    if (next < now) next = now;  // overran the quantum; do not accumulate debt
    sleep_until_mono_ns(next);
    quantum_start = next;
  }
}

void StressController::memory_loop(std::size_t bytes, std::int64_t deadline_ns) {
  void* region = mmap(nullptr, bytes, PROT_READ | PROT_WRITE,
                      MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
  if (region == MAP_FAILED) return;
  stress_bytes_.store(bytes);
  auto* mem = static_cast<std::uint8_t*>(region);
  const std::size_t page = 4096;
  const std::size_t n_pages = bytes / page;

  // Shuffled page order (odd stride coprime to the page count) defeats
  // prefetching, so a pass costs realistic TLB/cache traffic.
  std::size_t stride = n_pages / 2 + 1;
  while (std::gcd(stride, n_pages) != 1) ++stride;

  std::uint8_t tick = 1;
  std::int64_t next_pass = now_mono_ns();
  // Pages per lane slice: same sliced occupancy as the CPU worker so the
  // pass contends at scheduler-like granularity.
  const std::size_t batch = 16384;
  while (!stop_flag_.load(std::memory_order_relaxed)) {
    if (deadline_ns != 0 && now_mono_ns() >= deadline_ns) break;
    std::size_t idx = 0;
    std::size_t done = 0;
    while (done < n_pages && !stop_flag_.load(std::memory_order_relaxed)) {
      const std::size_t this_batch = std::min(batch, n_pages - done);
      {
        auto lane = lane_.acquire();
        for (std::size_t i = 0; i < this_batch; ++i) {
          mem[idx * page] = tick;
          idx = (idx + stride) % n_pages;
        }
      }
      done += this_batch;
      sleep_until_mono_ns(now_mono_ns() + 100'000);
    }
    ++tick;
    touch_passes_.fetch_add(1);
    next_pass += 1'000'000'000;
    const std::int64_t now = now_mono_ns();
    if (next_pass < now) next_pass = now;
    while (!stop_flag_.load(std::memory_order_relaxed) &&
           now_mono_ns() < next_pass) {
      sleep_ms(10);
    }
  }
  munmap(region, bytes);
  stress_bytes_.store(0);
}

}  // namespace corebench
