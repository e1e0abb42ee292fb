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

#include "corebench/pipeline/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>

#include "corebench/corenet/launch.hpp"
#include "corebench/telemetry/monitor.hpp"
#include "corebench/time_util.hpp"
#include "json.hpp"

namespace corebench {

namespace fs = std::filesystem;

void ExperimentPlan::validate() const {
  if (!(rate_hz > 0.0)) throw std::invalid_argument("plan: rate_hz <= 0");
  if (repetitions < 0) throw std::invalid_argument("plan: repetitions < 0");
  if (!(stress_duration_s > 0.0)) {
    throw std::invalid_argument("plan: stress_duration_s <= 0");
  }
  if (sensor_duration_s > 0.0) {
    const double needed = warmup_s + plan_span_s(chaos_plan());
    if (sensor_duration_s < needed) {
      throw std::invalid_argument(
          "plan: sensor duration does not cover the chaos plan span");
    }
  }
}

ChaosPlan ExperimentPlan::chaos_plan() const {
  ChaosPlan p;
  p.targets = targets;
  p.repetitions = repetitions;
  p.duration_s = stress_duration_s;
  p.cooldown_s = cooldown_s;
  p.cpu_load_pct = cpu_load_pct;
  p.memory_mib = memory_mib;
  return p;
}

double ExperimentPlan::effective_sensor_duration_s() const {
  if (sensor_duration_s > 0.0) return sensor_duration_s;
  return warmup_s + plan_span_s(chaos_plan()) + guard_s + 3.0;
}

std::string ExperimentPlan::to_json() const {
  nlohmann::json targets_json = nlohmann::json::array();
  for (NfKind k : targets) targets_json.push_back(std::string(to_string(k)));
  nlohmann::json j{
      {"port_base", port_base},
      {"work_units", work_units},
      {"store_size", store_size},
      {"sensor",
       {{"rate_hz", rate_hz},
        {"duration_s", sensor_duration_s},
        {"ue_pool", ue_pool},
        {"timeout_ms", timeout_ms}}},
      {"chaos",
       {{"targets", targets_json},
        {"repetitions", repetitions},
        {"duration_s", stress_duration_s},
        {"cooldown_s", cooldown_s},
        {"cpu_load_pct", cpu_load_pct},
        {"memory_mib", memory_mib}}},
      {"guard_s", guard_s},
      {"warmup_s", warmup_s},
      {"seed", seed},
      {"monitor_interval_ms", monitor_interval_ms},
  };
  if (capture) j["capture"] = std::string(to_string(*capture));
  return j.dump(2);
}

ExperimentPlan ExperimentPlan::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentPlan p;
  p.port_base = j.value("port_base", kDefaultPortBase);
  p.work_units = j.value("work_units", kDefaultWorkUnits);
  p.store_size = j.value("store_size", kDefaultStoreSize);
  if (j.contains("sensor")) {
    const auto& s = j["sensor"];
    p.rate_hz = s.value("rate_hz", 4.0);
    p.sensor_duration_s = s.value("duration_s", 0.0);
    p.ue_pool = s.value("ue_pool", std::size_t{64});
    p.timeout_ms = s.value("timeout_ms", 5000);
  }
  if (j.contains("chaos")) {
    const auto& c = j["chaos"];
    if (c.contains("targets")) {
      p.targets.clear();
      for (const auto& t : c["targets"]) {
        const std::string name = t.get<std::string>();
        if (name == "all") {
          p.targets.assign(kAllNfKinds.begin(), kAllNfKinds.end());
          break;
        }
        const auto kind = parse_nf_kind(name);
        if (!kind) throw std::invalid_argument("plan: unknown target " + name);
        p.targets.push_back(*kind);
      }
    }
    p.repetitions = c.value("repetitions", 2);
    p.stress_duration_s = c.value("duration_s", 20.0);
    p.cooldown_s = c.value("cooldown_s", 20.0);
    p.cpu_load_pct = c.value("cpu_load_pct", 50.0);
    p.memory_mib = c.value("memory_mib", std::size_t{512});
  }
  p.guard_s = j.value("guard_s", 2.0);
  p.warmup_s = j.value("warmup_s", 5.0);
  p.seed = j.value("seed", std::uint64_t{1});
  p.monitor_interval_ms = j.value("monitor_interval_ms", 1000);
  if (j.contains("capture")) {
    const std::string b = j["capture"].get<std::string>();
    if (b == "inline") {
      p.capture = CaptureBackend::InlineTap;
    } else if (b == "observer") {
      p.capture = CaptureBackend::ExternalObserver;
    } else if (!b.empty() && b != "none") {
      throw std::invalid_argument("plan: unknown capture backend " + b);
    }
  }
  return p;
}

ExperimentPlan ExperimentPlan::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("plan: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const std::string& what) {
  throw std::runtime_error("stage " + stage + ": " + what);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan_in,
                                const std::string& out_dir) {
  ExperimentPlan plan = plan_in;
  if (const char* env = std::getenv("COREBENCH_SEED"); env && *env) {
    plan.seed = std::strtoull(env, nullptr, 10);
  }
  plan.validate();

  fs::create_directories(out_dir);
  ExperimentResult result;
  result.out_dir = out_dir;
  {
    std::ofstream out(fs::path(out_dir) / "plan.json");
    out << plan.to_json() << "\n";
  }

  // Stage: boot.
  const Topology topo =
      Topology::standard(plan.port_base, plan.work_units, plan.store_size);
  topo.save_file((fs::path(out_dir) / "topology.json").string());
  CoreHandle core;
  try {
    core = CoreHandle::up(topo);
  } catch (const std::exception& e) {
    stage_fail("boot", e.what());
  }
  core.save_descriptor((fs::path(out_dir) / "core.json").string());

  // Stage: provision.
  try {
    core.provision(plan.ue_pool);
  } catch (const std::exception& e) {
    stage_fail("provision", e.what());
  }

  // Stage: monitor.
  ResourceMonitor monitor;
  try {
    std::vector<MonitorTarget> targets;
    for (const auto& p : core.nfs()) {
      targets.push_back({p.kind, p.pid, p.port});
    }
    monitor.start(targets, plan.monitor_interval_ms);
  } catch (const std::exception& e) {
    stage_fail("monitor", e.what());
  }

  // Stage: capture (optional).
  std::optional<CaptureSession> capture;
  if (plan.capture) {
    try {
      std::vector<CaptureEndpoint> eps;
      for (const auto& p : core.nfs()) eps.push_back({p.kind, p.port});
      CaptureOptions copts;
      copts.observer_port = plan.port_base;  // base port stays free for this
      capture = CaptureSession::start(*plan.capture, eps, copts);
    } catch (const std::exception& e) {
      stage_fail("capture", e.what());
    }
  }

  // Stage: load. Sensor runs open-loop while the chaos plan executes.
  const std::uint16_t amf_port = topo.get(NfKind::AMF).listen_port;
  try {
    SensorConfig scfg;
    scfg.rate_hz = plan.rate_hz;
    scfg.duration_s = plan.effective_sensor_duration_s();
    scfg.ue_pool = plan.ue_pool;
    scfg.timeout_ms = plan.timeout_ms;
    scfg.seed = plan.seed;
    auto sensor_future = std::async(std::launch::async, [&] {
      return run_sensor(scfg, amf_port);
    });
    sleep_until_mono_ns(now_mono_ns() +
                        static_cast<std::int64_t>(plan.warmup_s * 1e9));
    result.windows = run_plan(plan.chaos_plan(), topo);
    result.samples = sensor_future.get();
  } catch (const std::exception& e) {
    stage_fail("load", e.what());
  }
  write_samples_csv((fs::path(out_dir) / "samples.csv").string(),
                    result.samples);
  write_windows_jsonl((fs::path(out_dir) / "windows.jsonl").string(),
                      result.windows);

  // Stage: teardown of live telemetry.
  std::vector<CaptureStats> capture_stats_list;
  try {
    if (capture) {
      CaptureResult cr = capture->stop();
      write_packet_feed_jsonl((fs::path(out_dir) / "pcap.jsonl").string(),
                              cr.records);
      std::ofstream out(fs::path(out_dir) / "capture_stats.json");
      out << cr.stats.to_json() << "\n";
      result.capture_stats = cr.stats;
      capture_stats_list.push_back(std::move(cr.stats));
    }
    const auto res_samples = monitor.stop();
    write_resource_csv((fs::path(out_dir) / "resources.csv").string(),
                       res_samples);
    core.stop();
  } catch (const std::exception& e) {
    stage_fail("teardown", e.what());
  }

  // Stage: merge.
  try {
    result.merged = merge_samples(result.samples, result.windows, plan.guard_s);
  } catch (const std::exception& e) {
    stage_fail("merge", e.what());
  }
  write_labeled_csv((fs::path(out_dir) / "labeled.csv").string(),
                    result.merged.labeled);
  {
    std::ofstream out(fs::path(out_dir) / "merge_summary.json");
    out << result.merged.summary_json() << "\n";
  }

  // Stage: stats. Analysis failures are reported, not fatal: a degenerate
  // plan (e.g. zero targets) still yields a complete report bundle.
  const stats::LabeledDataset ds = result.merged.dataset();
  try {
    const auto groups = ds.values_by_nf();
    result.anova = stats::anova_oneway(groups);
  } catch (const std::exception& e) {
    result.anova_note = e.what();
  }
  try {
    result.lmm = stats::lmm_fit(ds);
  } catch (const std::exception& e) {
    result.lmm_note = e.what();
  }
  if (result.anova) {
    std::ofstream out(fs::path(out_dir) / "anova.txt");
    out << format_anova(*result.anova, "nf");
  }
  if (result.lmm) {
    std::ofstream t(fs::path(out_dir) / "lmm.txt");
    t << format_lmm(*result.lmm);
    std::ofstream j(fs::path(out_dir) / "lmm.json");
    j << lmm_to_json(*result.lmm) << "\n";
  }

  // Stage: report.
  try {
    ReportArtifacts art;
    art.merged = &result.merged;
    art.anova = result.anova;
    art.anova_note = result.anova_note;
    art.lmm = result.lmm;
    art.lmm_note = result.lmm_note;
    art.capture = capture_stats_list;
    result.report =
        emit_report(art, (fs::path(out_dir) / "report").string());
  } catch (const std::exception& e) {
    stage_fail("report", e.what());
  }
  return result;
}

}  // namespace corebench
