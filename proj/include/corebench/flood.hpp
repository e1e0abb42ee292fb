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

#ifndef COREBENCH_FLOOD_HPP_
#define COREBENCH_FLOOD_HPP_

#include <cstdint>
#include <string>

namespace corebench {

enum class FloodMode {
  ValidFrame,    // well-formed registration requests with random ue ids
  GarbageBytes,  // random byte blobs; exercises parser rejection
};

struct FloodConfig {
  std::uint16_t target_port = 0;
  int concurrency = 1;  // closed-loop workers (send, await or error, repeat)
  double duration_s = 10.0;
  std::size_t payload_bytes = 64;
  FloodMode mode = FloodMode::ValidFrame;
  std::uint64_t seed = 1;

  void validate() const;
};

struct FloodReport {
  std::uint64_t attempted = 0;
  std::uint64_t completed = 0;  // got any reply
  std::uint64_t errored = 0;    // send/recv failure
  double achieved_rps = 0.0;    // attempted / wall duration
  std::uint64_t bytes_sent = 0;
  double wall_s = 0.0;
  std::string error;  // set when the target was unreachable at start

  std::string to_json() const;
};

/// Runs `concurrency` workers issuing back-to-back requests at the target
/// for duration_s. Never throws for an unreachable target; the report says
/// so (attempted = 0 with a diagnostic).
FloodReport run_flood(const FloodConfig& cfg);

}  // namespace corebench

#endif  // COREBENCH_FLOOD_HPP_
