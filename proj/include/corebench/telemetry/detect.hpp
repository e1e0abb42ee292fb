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

#ifndef COREBENCH_TELEMETRY_DETECT_HPP_
#define COREBENCH_TELEMETRY_DETECT_HPP_

#include <memory>
#include <span>

#include "corebench/telemetry/capture.hpp"

namespace corebench {

enum class TrafficVerdict { Normal, DDoS };

/// Pluggable classifier over a window of the hex packet feed. Replace the
/// baseline rate policy with any scorer (e.g. an ML model consuming the
/// payload_hex fields) by implementing this interface.
class DetectorPolicy {
 public:
  virtual ~DetectorPolicy() = default;
  /// Throws std::invalid_argument on an empty window.
  virtual TrafficVerdict classify(std::span<const PacketRecord> window,
                                  double window_s) const = 0;
};

/// Baseline policy: DDoS iff the frame rate toward any single NF over the
/// window exceeds a threshold.
class RateThresholdDetector : public DetectorPolicy {
 public:
  explicit RateThresholdDetector(double threshold_fps);

  TrafficVerdict classify(std::span<const PacketRecord> window,
                          double window_s) const override;

  double threshold_fps() const { return threshold_fps_; }

  /// The busiest NF (the AMF) receives four frames per sensor transaction
  /// (two requests, two upstream replies).
  static double nominal_nf_frame_rate(double sensor_rate_hz) {
    return 4.0 * sensor_rate_hz;
  }

  /// Default threshold: 10x the sensor-derived nominal per-NF frame rate.
  static RateThresholdDetector for_sensor_rate(double sensor_rate_hz) {
    return RateThresholdDetector(10.0 * nominal_nf_frame_rate(sensor_rate_hz));
  }

 private:
  double threshold_fps_;
};

TrafficVerdict detect(std::span<const PacketRecord> window, double window_s,
                      const DetectorPolicy& policy);

}  // namespace corebench

#endif  // COREBENCH_TELEMETRY_DETECT_HPP_
