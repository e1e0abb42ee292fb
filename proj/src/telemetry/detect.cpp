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

#include "corebench/telemetry/detect.hpp"

#include <map>
#include <stdexcept>

namespace corebench {

RateThresholdDetector::RateThresholdDetector(double threshold_fps)
    : threshold_fps_(threshold_fps) {
  if (!(threshold_fps > 0.0)) {
    throw std::invalid_argument("detector: threshold must be positive");
  }
}

TrafficVerdict RateThresholdDetector::classify(
    std::span<const PacketRecord> window, double window_s) const {
  if (window.empty()) {
    throw std::invalid_argument("detector: empty window");
  }
  if (!(window_s > 0.0)) {
    throw std::invalid_argument("detector: non-positive window span");
  }
  std::map<std::string, std::uint64_t> per_dst;
  for (const auto& r : window) per_dst[r.dst_nf]++;
  for (const auto& [dst, count] : per_dst) {
    if (static_cast<double>(count) / window_s > threshold_fps_) {
      return TrafficVerdict::DDoS;
    }
  }
  return TrafficVerdict::Normal;
}

TrafficVerdict detect(std::span<const PacketRecord> window, double window_s,
                      const DetectorPolicy& policy) {
  return policy.classify(window, window_s);
}

}  // namespace corebench
