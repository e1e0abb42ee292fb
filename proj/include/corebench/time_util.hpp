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

#ifndef COREBENCH_TIME_UTIL_HPP_
#define COREBENCH_TIME_UTIL_HPP_

#include <chrono>
#include <cstdint>
#include <thread>

namespace corebench {

/// Monotonic clock, ns. Every correlation between logs (samples vs. stress
/// windows) happens in this domain.
inline std::int64_t now_mono_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Wall clock, ns since the Unix epoch. For human-facing timestamps only.
inline std::int64_t now_wall_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

inline void sleep_until_mono_ns(std::int64_t deadline_ns) {
  for (;;) {
    std::int64_t now = now_mono_ns();
    if (now >= deadline_ns) return;
    std::this_thread::sleep_for(std::chrono::nanoseconds(deadline_ns - now));
  }
}

inline void sleep_ms(std::int64_t ms) {
  std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

inline double ns_to_ms(std::int64_t ns) {
  return static_cast<double>(ns) / 1e6;
}

/// CPU time consumed by the calling thread, ns. Used by capture paths to
/// self-account their overhead.
std::int64_t thread_cpu_ns();

}  // namespace corebench

#endif  // COREBENCH_TIME_UTIL_HPP_
