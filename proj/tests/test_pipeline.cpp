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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "corebench/csv.hpp"
#include "corebench/pipeline/experiment.hpp"
#include "corebench/pipeline/merge.hpp"
#include "corebench/pipeline/report.hpp"
#include "support/testnet.hpp"

using namespace corebench;
namespace ts = corebench::testsupport;
namespace fs = std::filesystem;

namespace {

RegistrationSample sample_at(std::uint64_t seq, double t_s,
                             SampleOutcome outcome = SampleOutcome::Success) {
  RegistrationSample s;
  s.seq = seq;
  s.ue_id = "ue-000001";
  s.mono_ts_ns = static_cast<std::int64_t>(t_s * 1e9);
  s.wall_ts_ns = s.mono_ts_ns + 1'000'000'000;
  s.reg_ms = 10.0;
  s.pdu_ms = 12.0;
  s.total_ms = 22.0 + static_cast<double>(seq);
  s.outcome = outcome;
  s.sched_lag_ms = 0.0;
  return s;
}

WorkloadWindow window_at(const std::string& id, NfKind target, StressKind kind,
                         double start_s, double end_s, bool realized = true) {
  WorkloadWindow w;
  w.id = id;
  w.scenario.target = target;
  w.scenario.kind = kind;
  w.scenario.duration_s = end_s - start_s;
  w.start_mono_ns = static_cast<std::int64_t>(start_s * 1e9);
  w.end_mono_ns = static_cast<std::int64_t>(end_s * 1e9);
  w.start_wall_ns = w.start_mono_ns + 1'000'000'000;
  w.end_wall_ns = w.end_mono_ns + 1'000'000'000;
  w.realized = realized;
  return w;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("merge labels by window containment, guard, and baseline") {
  const std::vector<WorkloadWindow> windows = {
      window_at("w-0000", NfKind::AMF, StressKind::Cpu, 5.0, 25.0)};
  const std::vector<RegistrationSample> samples = {
      sample_at(0, 2.0),    // before the window: baseline
      sample_at(1, 10.0),   // inside: stressed AMF/CPU
      sample_at(2, 26.0),   // 1 s after end, guard 2 s: discarded
      sample_at(3, 60.0)};  // far after: baseline

  const MergeResult m = merge_samples(samples, windows, 2.0);
  REQUIRE(m.labeled.size() == 3);
  REQUIRE(m.discarded.size() == 1);
  CHECK(m.discarded[0].seq == 2);
  CHECK(m.discarded[0].reason == "cooldown_guard");

  CHECK_FALSE(m.labeled[0].stressed);
  CHECK(m.labeled[1].stressed);
  CHECK(m.labeled[1].nf == NfKind::AMF);
  CHECK(m.labeled[1].kind == StressKind::Cpu);
  CHECK(m.labeled[1].window_id == "w-0000");
  CHECK_FALSE(m.labeled[2].stressed);
  // Baseline attribution: nearest preceding window's target (or the next
  // one for pre-window samples).
  CHECK(m.labeled[0].nf == NfKind::AMF);
  CHECK(m.labeled[2].nf == NfKind::AMF);
}

TEST_CASE("merge partition property: every sample labeled or discarded once") {
  std::vector<WorkloadWindow> windows = {
      window_at("w-0000", NfKind::AMF, StressKind::Cpu, 10.0, 20.0),
      window_at("w-0001", NfKind::UDM, StressKind::Memory, 30.0, 40.0),
      window_at("w-0002", NfKind::UDR, StressKind::CpuMemory, 50.0, 60.0,
                /*realized=*/false)};
  std::vector<RegistrationSample> samples;
  for (int i = 0; i < 140; ++i) {
    samples.push_back(sample_at(static_cast<std::uint64_t>(i), 0.5 * i));
  }
  const MergeResult m = merge_samples(samples, windows, 2.0);
  CHECK(m.labeled.size() + m.discarded.size() == samples.size());

  bool saw_unrealized_discard = false;
  for (const auto& d : m.discarded) {
    if (d.reason == "unrealized_window") saw_unrealized_discard = true;
  }
  CHECK(saw_unrealized_discard);

  // Baseline samples between windows attribute to the preceding target.
  for (const auto& ls : m.labeled) {
    if (ls.stressed) continue;
    const double t = static_cast<double>(ls.sample.mono_ts_ns) / 1e9;
    if (t > 22.0 && t < 30.0) CHECK(ls.nf == NfKind::AMF);
    if (t > 42.0 && t < 50.0) CHECK(ls.nf == NfKind::UDM);
  }
}

TEST_CASE("merge rejects overlapping windows and non-monotonic samples") {
  const std::vector<WorkloadWindow> overlapping = {
      window_at("w-0000", NfKind::AMF, StressKind::Cpu, 5.0, 25.0),
      window_at("w-0001", NfKind::UDM, StressKind::Cpu, 20.0, 30.0)};
  CHECK_THROWS_AS(merge_samples({sample_at(0, 1.0)}, overlapping, 2.0),
                  std::invalid_argument);

  std::vector<RegistrationSample> bad = {sample_at(0, 10.0),
                                         sample_at(1, 5.0)};
  CHECK_THROWS_AS(
      merge_samples(bad,
                    {window_at("w-0000", NfKind::AMF, StressKind::Cpu, 1.0,
                               2.0)},
                    2.0),
      std::invalid_argument);
}

TEST_CASE("merge output is deterministic byte-for-byte") {
  std::vector<WorkloadWindow> windows = {
      window_at("w-0000", NfKind::UDM, StressKind::Memory, 4.0, 8.0)};
  std::vector<RegistrationSample> samples;
  for (int i = 0; i < 50; ++i) {
    samples.push_back(sample_at(static_cast<std::uint64_t>(i), 0.3 * i,
                                i % 7 == 0 ? SampleOutcome::Timeout
                                           : SampleOutcome::Success));
  }
  const MergeResult a = merge_samples(samples, windows, 2.0);
  const MergeResult b = merge_samples(samples, windows, 2.0);
  const std::string pa = ts::tmp_path("labeled-a.csv");
  const std::string pb = ts::tmp_path("labeled-b.csv");
  write_labeled_csv(pa, a.labeled);
  write_labeled_csv(pb, b.labeled);
  CHECK(read_file(pa) == read_file(pb));
  std::remove(pa.c_str());
  std::remove(pb.c_str());
}

TEST_CASE("labeled csv round-trips into the stats loader") {
  std::vector<WorkloadWindow> windows = {
      window_at("w-0000", NfKind::AMF, StressKind::Cpu, 5.0, 15.0)};
  std::vector<RegistrationSample> samples = {
      sample_at(0, 1.0), sample_at(1, 7.0),
      sample_at(2, 8.0, SampleOutcome::Timeout), sample_at(3, 30.0)};
  const MergeResult m = merge_samples(samples, windows, 2.0);
  const std::string path = ts::tmp_path("labeled.csv");
  write_labeled_csv(path, m.labeled);

  std::size_t dropped = 0;
  const auto ds = stats::load_labeled_csv(path, "total_ms", false, &dropped);
  CHECK(dropped == 1);  // the timeout row
  REQUIRE(ds.rows.size() == 3);
  CHECK(ds.rows[1].stress == StressKind::Cpu);
  CHECK_FALSE(ds.rows[0].stress.has_value());
  CHECK(ds.rows[0].nf == NfKind::AMF);

  // reg_ms as the analysis column works too.
  const auto ds_reg = stats::load_labeled_csv(path, "reg_ms");
  CHECK(ds_reg.rows[0].latency_ms == doctest::Approx(10.0));
  std::remove(path.c_str());
}

TEST_CASE("report emits the expected csv shapes") {
  std::vector<WorkloadWindow> windows = {
      window_at("w-0000", NfKind::AMF, StressKind::Cpu, 10.0, 20.0),
      window_at("w-0001", NfKind::AMF, StressKind::CpuMemory, 30.0, 40.0),
      window_at("w-0002", NfKind::UDM, StressKind::Cpu, 50.0, 60.0),
      window_at("w-0003", NfKind::UDM, StressKind::CpuMemory, 70.0, 80.0)};
  std::vector<RegistrationSample> samples;
  for (int i = 0; i < 200; ++i) {
    auto s = sample_at(static_cast<std::uint64_t>(i), 0.45 * i);
    // Make AMF the most affected under combined stress.
    const double t = 0.45 * i;
    s.total_ms = 20.0;
    if (t >= 10 && t < 20) s.total_ms = 50.0;   // AMF cpu
    if (t >= 30 && t < 40) s.total_ms = 90.0;   // AMF cpu+mem
    if (t >= 50 && t < 60) s.total_ms = 40.0;   // UDM cpu
    if (t >= 70 && t < 80) s.total_ms = 60.0;   // UDM cpu+mem
    samples.push_back(s);
  }
  const MergeResult m = merge_samples(samples, windows, 2.0);

  ReportArtifacts art;
  art.merged = &m;
  art.anova_note = "not computed";
  art.lmm_note = "not computed";
  const std::string dir = ts::tmp_path("report");
  const ReportSummary sum = emit_report(art, dir);

  CHECK(sum.most_affected_nf == NfKind::AMF);
  REQUIRE(sum.kind_inflation.size() == 2);  // CPU and CpuMemory present
  CHECK(sum.kind_inflation[0].first == StressKind::CpuMemory);

  const CsvTable interaction = read_csv(dir + "/interaction.csv");
  CHECK(interaction.rows.size() == 2 * 3);  // 2 NFs x 3 stress kinds
  const CsvTable kinds = read_csv(dir + "/kind_summary.csv");
  CHECK(kinds.rows.size() == 3);  // Baseline, CPU, CpuMemory
  fs::remove_all(dir);
}

TEST_CASE("report on an empty dataset writes header-only csvs") {
  MergeResult empty;
  ReportArtifacts art;
  art.merged = &empty;
  art.anova_note = "empty";
  art.lmm_note = "empty";
  const std::string dir = ts::tmp_path("report-empty");
  emit_report(art, dir);
  const std::string interaction = read_file(dir + "/interaction.csv");
  CHECK(interaction == "nf,kind,mean_ms,std_ms,n\n");
  const std::string nf = read_file(dir + "/nf_summary.csv");
  CHECK(nf == "nf,n,mean_ms,std_ms,median_ms,p95_ms\n");
  fs::remove_all(dir);
}

TEST_CASE("plan json round trip and validation") {
  ExperimentPlan p;
  p.targets = {NfKind::AMF, NfKind::UDM, NfKind::UDR};
  p.repetitions = 2;
  p.stress_duration_s = 10.0;
  p.cooldown_s = 10.0;
  p.rate_hz = 4.0;
  const ExperimentPlan q = ExperimentPlan::from_json(p.to_json());
  CHECK(q.targets == p.targets);
  CHECK(q.repetitions == 2);
  CHECK(q.stress_duration_s == doctest::Approx(10.0));
  CHECK(q.effective_sensor_duration_s() ==
        doctest::Approx(p.warmup_s + 3 * 3 * 2 * 20.0 + p.guard_s + 3.0));

  ExperimentPlan bad = p;
  bad.sensor_duration_s = 10.0;  // cannot cover the chaos span
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const ExperimentPlan all = ExperimentPlan::from_json(
      "{\"chaos\":{\"targets\":[\"all\"],\"repetitions\":1}}");
  CHECK(all.targets.size() == kNfCount);
}

TEST_CASE("end-to-end experiment on a tiny plan") {
  ExperimentPlan plan;
  plan.port_base = 8300;
  plan.work_units = 20'000;
  plan.store_size = 64;
  plan.rate_hz = 4.0;
  plan.ue_pool = 16;
  plan.targets = {NfKind::AMF, NfKind::UDR};
  plan.repetitions = 1;
  plan.stress_duration_s = 2.0;
  plan.cooldown_s = 1.0;
  plan.memory_mib = 64;
  plan.guard_s = 0.5;
  plan.warmup_s = 2.0;
  plan.monitor_interval_ms = 500;
  plan.capture = CaptureBackend::InlineTap;

  const std::string dir = ts::tmp_path("exp");
  const ExperimentResult r = run_experiment(plan, dir);

  const auto expected_samples = static_cast<std::size_t>(
      plan.rate_hz * plan.effective_sensor_duration_s());
  CHECK(r.samples.size() == expected_samples);
  CHECK(r.windows.size() == 6);  // 2 targets x 3 kinds x 1 rep
  for (const auto& w : r.windows) CHECK(w.realized);
  CHECK(r.merged.labeled.size() + r.merged.discarded.size() ==
        r.samples.size());
  CHECK(r.anova.has_value());
  CHECK(r.lmm.has_value());
  CHECK(r.lmm->terms.size() == 4);  // Intercept + 3 stress kinds

  for (const char* f :
       {"plan.json", "topology.json", "core.json", "samples.csv",
        "windows.jsonl", "resources.csv", "labeled.csv", "merge_summary.json",
        "anova.txt", "lmm.txt", "lmm.json", "report/summary.txt",
        "report/interaction.csv", "pcap.jsonl", "capture_stats.json",
        "report/capture_overhead.csv"}) {
    CHECK_MESSAGE(fs::exists(fs::path(dir) / f), f);
  }
  REQUIRE(r.capture_stats.has_value());
  CHECK(r.capture_stats->frames_captured > 0);
  fs::remove_all(dir);
}

TEST_CASE("experiment with zero chaos targets degrades gracefully") {
  ExperimentPlan plan;
  plan.port_base = 8320;
  plan.work_units = 20'000;
  plan.store_size = 64;
  plan.rate_hz = 4.0;
  plan.ue_pool = 8;
  plan.targets = {};
  plan.repetitions = 0;
  plan.warmup_s = 1.0;
  plan.sensor_duration_s = 5.0;
  plan.monitor_interval_ms = 500;

  const std::string dir = ts::tmp_path("exp0");
  const ExperimentResult r = run_experiment(plan, dir);
  CHECK(r.windows.empty());
  CHECK(r.samples.size() == 20);
  // All samples baseline, none attributable: LMM reports the single
  // treatment level, the ANOVA stage reports the missing groups, and the
  // run still completes with a full report bundle.
  CHECK_FALSE(r.lmm.has_value());
  const bool note_ok = r.lmm_note.find("treatment level") != std::string::npos ||
                       r.lmm_note.find("empty") != std::string::npos;
  CHECK(note_ok);
  CHECK_FALSE(r.anova.has_value());
  CHECK(fs::exists(fs::path(dir) / "report/summary.txt"));
  fs::remove_all(dir);
}
