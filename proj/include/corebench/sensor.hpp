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

#ifndef COREBENCH_SENSOR_HPP_
#define COREBENCH_SENSOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace corebench {

struct SensorConfig {
  double rate_hz = 2.0;
  double duration_s = 60.0;
  std::size_t ue_pool = 64;  // ids drawn round-robin from ue-000000..
  int timeout_ms = 5000;     // per-phase flow deadline
  std::uint64_t seed = 1;    // drives per-transaction payload bytes
  std::string ue_prefix = "ue-";

  void validate() const;  // throws std::invalid_argument
};

enum class SampleOutcome {
  Success,
  Reject,
  Timeout,  // any failure to complete: deadline, error reply, broken conn
};

std::string_view to_string(SampleOutcome o);

struct RegistrationSample {
  std::uint64_t seq = 0;
  std::string ue_id;
  std::int64_t wall_ts_ns = 0;  // send time, wall clock
  std::int64_t mono_ts_ns = 0;  // send time, monotonic clock
  double reg_ms = -1.0;         // < 0 marks an absent phase latency
  double pdu_ms = -1.0;
  double total_ms = 0.0;  // end-to-end registration + session time
  SampleOutcome outcome = SampleOutcome::Timeout;
  double sched_lag_ms = 0.0;  // actual send minus nominal schedule
};

/// Issues floor(rate_hz * duration_s) transactions on a fixed open-loop
/// schedule against the AMF: a slow response never delays the next send,
/// and a missed deadline sends immediately (recorded as sched_lag) rather
/// than skipping. Each transaction runs registration then PDU session
/// establishment on its own worker and connection. Throws std::runtime_error
/// when the core is unreachable at start.
std::vector<RegistrationSample> run_sensor(const SensorConfig& cfg,
                                           std::uint16_t amf_port);

struct DescriptiveStats {
  std::size_t n = 0;  // latency values the moments are computed over
  double mean_ms = 0.0;
  double std_ms = 0.0;  // sample standard deviation (n-1 denominator)
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double success_rate = 0.0;
  bool degenerate_n = false;  // n < 2: std reported as 0 by convention
};

/// Moments and nearest-rank percentiles of raw values. Throws on empty.
DescriptiveStats summarize_values(const std::vector<double>& values);

/// Latency stats of the successful samples plus the overall success rate.
DescriptiveStats summarize(const std::vector<RegistrationSample>& samples);

/// "451.46 ms (standard deviation: 7.80 ms)" style rendering.
std::string format_descriptive(const DescriptiveStats& s);

void write_samples_csv(const std::string& path,
                       const std::vector<RegistrationSample>& samples);
std::vector<RegistrationSample> read_samples_csv(const std::string& path);

}  // namespace corebench

#endif  // COREBENCH_SENSOR_HPP_
