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

#ifndef COREBENCH_STATS_DATASET_HPP_
#define COREBENCH_STATS_DATASET_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corebench/nf_kind.hpp"
#include "corebench/stress_kind.hpp"

namespace corebench::stats {

/// One analyzed observation: a transaction latency, the NF it is attributed
/// to (grouping factor), and the stress treatment active when it started
/// (nullopt = baseline).
struct LabeledRow {
  double latency_ms = 0.0;
  NfKind nf = NfKind::AMF;
  std::optional<StressKind> stress;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;

  /// Values grouped by NF, in enum order, for the one-way ANOVA.
  std::vector<std::vector<double>> values_by_nf() const;

  /// Values grouped by treatment. Key "None" holds the baseline rows.
  std::map<std::string, std::vector<double>> values_by_stress() const;

  std::size_t distinct_nf_count() const;
  std::size_t distinct_stress_level_count() const;  // includes baseline level
};

/// Reads a labeled-sample CSV produced by the merge step
/// (header seq,total_ms,reg_ms,pdu_ms,outcome,label,nf,kind,window_id).
/// `latency_column` selects total_ms (default), reg_ms, or pdu_ms.
/// Rows with outcome != success are skipped unless include_failures is set;
/// the skipped count is returned through dropped_failures when non-null.
LabeledDataset load_labeled_csv(const std::string& path,
                                const std::string& latency_column = "total_ms",
                                bool include_failures = false,
                                std::size_t* dropped_failures = nullptr);

}  // namespace corebench::stats

#endif  // COREBENCH_STATS_DATASET_HPP_
