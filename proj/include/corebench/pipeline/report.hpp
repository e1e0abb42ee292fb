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

#ifndef COREBENCH_PIPELINE_REPORT_HPP_
#define COREBENCH_PIPELINE_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "corebench/pipeline/merge.hpp"
#include "corebench/stats/anova.hpp"
#include "corebench/stats/lmm.hpp"
#include "corebench/telemetry/capture.hpp"

namespace corebench {

struct ReportArtifacts {
  const MergeResult* merged = nullptr;
  std::optional<stats::AnovaResult> anova;
  std::string anova_note;  // set when the ANOVA stage could not run
  std::optional<stats::LmmFit> lmm;
  std::string lmm_note;
  std::vector<CaptureStats> capture;  // zero, one or both backends
};

struct ReportSummary {
  double baseline_mean_ms = 0.0;
  std::size_t baseline_n = 0;
  // Mean latency inflation over baseline per stress kind, most harmful
  // first.
  std::vector<std::pair<StressKind, double>> kind_inflation;
  // NF with the largest combined-stress mean inflation, when measurable.
  std::optional<NfKind> most_affected_nf;
};

/// Writes plot-data CSVs (per-NF summary, per-kind summary, NF x kind
/// interaction means, capture overhead) plus a human-readable summary.txt
/// into out_dir. Missing artifacts are noted, never fatal; an empty dataset
/// produces header-only CSVs.
ReportSummary emit_report(const ReportArtifacts& art,
                          const std::string& out_dir);

}  // namespace corebench

#endif  // COREBENCH_PIPELINE_REPORT_HPP_
