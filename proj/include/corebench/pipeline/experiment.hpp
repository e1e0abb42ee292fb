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

#ifndef COREBENCH_PIPELINE_EXPERIMENT_HPP_
#define COREBENCH_PIPELINE_EXPERIMENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "corebench/chaos.hpp"
#include "corebench/pipeline/merge.hpp"
#include "corebench/pipeline/report.hpp"
#include "corebench/stats/anova.hpp"
#include "corebench/stats/lmm.hpp"
#include "corebench/telemetry/capture.hpp"

namespace corebench {

/// One end-to-end benchmarking run: core boot, UE provisioning, monitor,
/// optional capture, open-loop sensor load with the chaos plan injected in
/// parallel, merge, factor analysis, report bundle.
struct ExperimentPlan {
  std::uint16_t port_base = kDefaultPortBase;
  std::uint64_t work_units = kDefaultWorkUnits;
  std::size_t store_size = kDefaultStoreSize;

  double rate_hz = 4.0;
  double sensor_duration_s = 0.0;  // 0 = warmup + chaos span + tail
  std::size_t ue_pool = 64;
  int timeout_ms = 5000;

  std::vector<NfKind> targets{kAllNfKinds.begin(), kAllNfKinds.end()};
  int repetitions = 2;
  double stress_duration_s = 20.0;
  double cooldown_s = 20.0;
  double cpu_load_pct = 50.0;
  std::size_t memory_mib = 512;

  double guard_s = 2.0;
  double warmup_s = 5.0;
  std::uint64_t seed = 1;
  int monitor_interval_ms = 1000;
  std::optional<CaptureBackend> capture;

  void validate() const;
  double effective_sensor_duration_s() const;
  ChaosPlan chaos_plan() const;

  std::string to_json() const;
  static ExperimentPlan from_json(const std::string& text);
  static ExperimentPlan load_file(const std::string& path);
};

struct ExperimentResult {
  std::vector<RegistrationSample> samples;
  std::vector<WorkloadWindow> windows;
  MergeResult merged;
  std::optional<stats::AnovaResult> anova;
  std::string anova_note;
  std::optional<stats::LmmFit> lmm;
  std::string lmm_note;
  std::optional<CaptureStats> capture_stats;
  ReportSummary report;
  std::string out_dir;
};

/// Runs the whole plan, writing every artifact under out_dir as it becomes
/// available (partial artifacts survive a failed stage). Failures carry the
/// stage name: std::runtime_error("stage <name>: ...").
/// COREBENCH_SEED in the environment overrides the plan seed.
ExperimentResult run_experiment(const ExperimentPlan& plan,
                                const std::string& out_dir);

}  // namespace corebench

#endif  // COREBENCH_PIPELINE_EXPERIMENT_HPP_
