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

#ifndef COREBENCH_PIPELINE_MERGE_HPP_
#define COREBENCH_PIPELINE_MERGE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "corebench/chaos.hpp"
#include "corebench/sensor.hpp"
#include "corebench/stats/dataset.hpp"

namespace corebench {

struct LabeledSample {
  RegistrationSample sample;
  bool stressed = false;
  // Attributed NF. For stressed samples, the stressed target; for baseline
  // samples, the target of the nearest preceding window (else the next one),
  // i.e. the experiment block the sample was measured under. Empty only
  // when no realized window exists to attribute against.
  std::optional<NfKind> nf;
  std::optional<StressKind> kind;  // present iff stressed
  std::string window_id;           // present iff stressed
};

struct MergeResult {
  std::vector<LabeledSample> labeled;
  struct Discarded {
    std::uint64_t seq = 0;
    std::string reason;  // "cooldown_guard" or "unrealized_window"
  };
  std::vector<Discarded> discarded;

  /// Analysis rows: labeled samples that carry an NF attribution and (by
  /// default) succeeded. Failure counts are the caller's to report.
  stats::LabeledDataset dataset(bool include_failures = false) const;

  std::string summary_json() const;
};

/// Labels each sample by its send timestamp: inside a realized window ->
/// Stressed with that window's target and kind; within guard_s after any
/// window end -> discarded; inside an unrealized window -> discarded;
/// otherwise Baseline. Throws std::invalid_argument on overlapping windows
/// or a non-monotonic sample log (clock-domain mismatch).
MergeResult merge_samples(const std::vector<RegistrationSample>& samples,
                          const std::vector<WorkloadWindow>& windows,
                          double guard_s = 2.0);

/// CSV with header seq,total_ms,reg_ms,pdu_ms,outcome,label,nf,kind,window_id.
void write_labeled_csv(const std::string& path,
                       const std::vector<LabeledSample>& labeled);

}  // namespace corebench

#endif  // COREBENCH_PIPELINE_MERGE_HPP_
