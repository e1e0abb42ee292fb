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

// corebench: chaos-engineering benchmark harness for a simulated 5G core.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "corebench/chaos.hpp"
#include "corebench/corenet/launch.hpp"
#include "corebench/flood.hpp"
#include "corebench/pipeline/experiment.hpp"
#include "corebench/pipeline/merge.hpp"
#include "corebench/sensor.hpp"
#include "corebench/stats/anova.hpp"
#include "corebench/stats/lmm.hpp"
#include "corebench/telemetry/capture.hpp"
#include "corebench/telemetry/monitor.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace {

using namespace corebench;

volatile std::sig_atomic_t g_signal = 0;
void on_signal(int) { g_signal = 1; }

constexpr const char* kDefaultState = "corebench-core.json";

std::vector<NfProcess> state_or_die(const std::string& path) {
  try {
    return load_descriptor(path);
  } catch (const std::exception& e) {
    throw CLI::RuntimeError(
        std::string("cannot load core state (is the core up?): ") + e.what(),
        2);
  }
}

std::uint16_t port_of_kind(const std::vector<NfProcess>& procs, NfKind kind) {
  for (const auto& p : procs) {
    if (p.kind == kind) return p.port;
  }
  throw CLI::RuntimeError("no " + std::string(to_string(kind)) +
                              " in core state",
                          2);
}

std::vector<NfKind> parse_targets(const std::string& spec) {
  std::vector<NfKind> out;
  if (spec == "all") {
    out.assign(kAllNfKinds.begin(), kAllNfKinds.end());
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto kind = parse_nf_kind(item);
    if (!kind) throw CLI::RuntimeError("unknown NF: " + item, 2);
    out.push_back(*kind);
  }
  return out;
}

int cmd_core_up(const std::string& topology_file, std::uint64_t work_units,
                std::uint16_t port_base, std::size_t store_size,
                const std::string& state_path) {
  Topology topo;
  if (!topology_file.empty()) {
    topo = Topology::load_file(topology_file);
    if (work_units != 0) {
      for (auto& c : topo.nfs) c.work_units = work_units;
    }
  } else {
    topo = Topology::standard(
        port_base, work_units == 0 ? kDefaultWorkUnits : work_units,
        store_size);
  }
  CoreHandle core = CoreHandle::up(topo);
  core.save_descriptor(state_path);
  std::printf("core up: %zu NFs, state in %s\n", core.nfs().size(),
              state_path.c_str());
  for (const auto& p : core.nfs()) {
    std::printf("  %-4s port %5u pid %d\n",
                std::string(to_string(p.kind)).c_str(), p.port, p.pid);
  }
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (g_signal == 0) sleep_ms(200);
  std::printf("shutting down\n");
  core.stop();
  std::remove(state_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corebench: chaos benchmarking for a simulated 5G core"};
  app.require_subcommand(1);

  // ---- core up / core provision ----
  auto* core = app.add_subcommand("core", "core lifecycle");
  core->require_subcommand(1);

  std::string topology_file;
  std::uint64_t work_units = 0;
  std::uint16_t port_base = kDefaultPortBase;
  std::size_t store_size = kDefaultStoreSize;
  std::string state_path = kDefaultState;
  auto* up = core->add_subcommand("up", "boot all NFs and run until SIGINT");
  up->add_option("--topology", topology_file, "topology JSON file");
  up->add_option("--work-units", work_units, "byte-mix rounds per frame");
  up->add_option("--port-base", port_base, "base port (NFs at base+1..)");
  up->add_option("--store-size", store_size, "UDR pre-provisioned entries");
  up->add_option("--state", state_path, "core descriptor output path");

  std::size_t ue_count = 64;
  std::string prov_state = kDefaultState;
  auto* provision = core->add_subcommand("provision", "add UE ids to the UDR");
  provision->add_option("--ue-count", ue_count, "ids to ensure")->required();
  provision->add_option("--state", prov_state, "core descriptor path");

  // ---- sensor ----
  double rate = 2.0, duration = 60.0;
  std::size_t pool = 64;
  int timeout_ms = 5000;
  std::uint64_t seed = 1;
  std::string samples_out = "samples.csv";
  std::string sensor_state = kDefaultState;
  auto* sensor =
      app.add_subcommand("sensor", "constant-rate UE load with latency log");
  sensor->add_option("--rate", rate, "transactions per second");
  sensor->add_option("--duration", duration, "seconds");
  sensor->add_option("--pool", pool, "UE pool size");
  sensor->add_option("--timeout-ms", timeout_ms, "per-phase deadline");
  sensor->add_option("--seed", seed, "payload seed");
  sensor->add_option("--out", samples_out, "sample CSV path");
  sensor->add_option("--state", sensor_state, "core descriptor path");

  // ---- chaos run ----
  auto* chaos = app.add_subcommand("chaos", "stress injection");
  chaos->require_subcommand(1);
  std::string targets_spec = "all";
  int reps = 1;
  double chaos_duration = 20.0, cooldown = 20.0, cpu_pct = 50.0;
  std::size_t memory_mib = 512;
  std::string windows_out = "windows.jsonl";
  std::string chaos_state = kDefaultState;
  auto* chaos_run = chaos->add_subcommand("run", "execute a stress plan");
  chaos_run->add_option("--targets", targets_spec, "all or AMF,UDM,...");
  chaos_run->add_option("--reps", reps, "repetitions per (NF, kind)");
  chaos_run->add_option("--duration", chaos_duration, "window seconds");
  chaos_run->add_option("--cooldown", cooldown, "gap seconds");
  chaos_run->add_option("--cpu", cpu_pct, "CPU load percent");
  chaos_run->add_option("--mem", memory_mib, "memory MiB");
  chaos_run->add_option("--out", windows_out, "window log path");
  chaos_run->add_option("--state", chaos_state, "core descriptor path");

  // ---- flood ----
  std::string flood_target = "amf";
  int concurrency = 100;
  double flood_duration = 10.0;
  std::string flood_mode = "valid";
  std::string flood_out = "flood.json";
  std::string flood_state = kDefaultState;
  std::uint64_t flood_seed = 1;
  auto* flood = app.add_subcommand("flood", "DDoS-style request flood");
  flood->add_option("--target", flood_target, "NF name");
  flood->add_option("--concurrency", concurrency, "worker count");
  flood->add_option("--duration", flood_duration, "seconds");
  flood->add_option("--mode", flood_mode, "valid | garbage");
  flood->add_option("--seed", flood_seed, "payload seed");
  flood->add_option("--out", flood_out, "report JSON path");
  flood->add_option("--state", flood_state, "core descriptor path");

  // ---- capture ----
  std::string backend = "inline";
  double capture_duration = 300.0;
  std::string pcap_out = "pcap.jsonl";
  std::string stats_out = "cap.json";
  std::uint16_t observer_port = 0;
  std::string capture_state = kDefaultState;
  auto* capture =
      app.add_subcommand("capture", "mirror NF frames into a hex feed");
  capture->add_option("--backend", backend, "inline | observer");
  capture->add_option("--duration", capture_duration, "seconds");
  capture->add_option("--out", pcap_out, "packet feed JSONL path");
  capture->add_option("--stats", stats_out, "overhead stats JSON path");
  capture->add_option("--observer-port", observer_port,
                      "observer listen port (default: port base)");
  capture->add_option("--state", capture_state, "core descriptor path");

  // ---- monitor ----
  int interval_ms = 1000;
  double monitor_duration = 0.0;
  std::string res_out = "res.csv";
  std::string monitor_state = kDefaultState;
  auto* monitor = app.add_subcommand("monitor", "per-NF resource sampling");
  monitor->add_option("--interval", interval_ms, "sampling interval ms");
  monitor->add_option("--duration", monitor_duration,
                      "seconds (0 = until SIGINT)");
  monitor->add_option("--out", res_out, "resource CSV path");
  monitor->add_option("--state", monitor_state, "core descriptor path");

  // ---- merge ----
  std::string merge_samples_path, merge_windows_path;
  double guard = 2.0;
  std::string labeled_out = "labeled.csv";
  auto* merge = app.add_subcommand("merge", "label samples with windows");
  merge->add_option("--samples", merge_samples_path, "sample CSV")->required();
  merge->add_option("--windows", merge_windows_path, "window JSONL")
      ->required();
  merge->add_option("--guard", guard, "post-window guard seconds");
  merge->add_option("--out", labeled_out, "labeled CSV path");

  // ---- stats anova / stats lmm ----
  auto* stats_cmd = app.add_subcommand("stats", "factor analysis");
  stats_cmd->require_subcommand(1);
  std::string anova_by = "nf";
  std::string anova_in = "labeled.csv";
  std::string anova_column = "total_ms";
  std::string anova_out;
  auto* anova = stats_cmd->add_subcommand("anova", "one-way ANOVA");
  anova->add_option("--by", anova_by, "grouping factor: nf | stress");
  anova->add_option("--in", anova_in, "labeled CSV");
  anova->add_option("--column", anova_column, "latency column");
  anova->add_option("--out", anova_out, "optional JSON output");

  std::string lmm_fixed = "stress";
  std::string lmm_group = "nf";
  std::string lmm_in = "labeled.csv";
  std::string lmm_column = "total_ms";
  std::string lmm_out = "fit.json";
  auto* lmm = stats_cmd->add_subcommand("lmm", "random-intercept LMM (REML)");
  lmm->add_option("--fixed", lmm_fixed, "fixed factor (stress)");
  lmm->add_option("--group", lmm_group, "grouping factor (nf)");
  lmm->add_option("--in", lmm_in, "labeled CSV");
  lmm->add_option("--column", lmm_column, "latency column");
  lmm->add_option("--out", lmm_out, "fit JSON path");

  // ---- run ----
  std::string plan_path;
  std::string out_dir = "results";
  auto* run = app.add_subcommand("run", "full experiment from a plan");
  run->add_option("--plan", plan_path, "plan JSON (omit for defaults)");
  run->add_option("--out-dir", out_dir, "artifact directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (up->parsed()) {
      return cmd_core_up(topology_file, work_units, port_base, store_size,
                         state_path);
    }
    if (provision->parsed()) {
      const auto procs = state_or_die(prov_state);
      Topology topo;
      for (const auto& p : procs) {
        NfConfig c;
        c.kind = p.kind;
        c.listen_port = p.port;
        topo.nfs.push_back(c);
      }
      CoreHandle tmp;  // provision goes straight to the UDR port
      Socket s = tcp_connect(port_of_kind(procs, NfKind::UDR), 2000);
      Frame f;
      f.msg_type = msg::kProvision;
      const std::string body =
          nlohmann::json{{"prefix", "ue-"}, {"count", ue_count}}.dump();
      f.payload.assign(body.begin(), body.end());
      if (request_reply(s, f, 5000).msg_type != msg::kProvisionAck) {
        std::fprintf(stderr, "provision rejected\n");
        return 1;
      }
      std::printf("provisioned %zu UE ids\n", ue_count);
      return 0;
    }
    if (sensor->parsed()) {
      const auto procs = state_or_die(sensor_state);
      SensorConfig cfg;
      cfg.rate_hz = rate;
      cfg.duration_s = duration;
      cfg.ue_pool = pool;
      cfg.timeout_ms = timeout_ms;
      cfg.seed = seed;
      const auto samples =
          run_sensor(cfg, port_of_kind(procs, NfKind::AMF));
      write_samples_csv(samples_out, samples);
      const DescriptiveStats st = summarize(samples);
      std::printf("%zu samples -> %s\n", samples.size(), samples_out.c_str());
      std::printf("latency: %s, success rate %.3f\n",
                  format_descriptive(st).c_str(), st.success_rate);
      return 0;
    }
    if (chaos_run->parsed()) {
      const auto procs = state_or_die(chaos_state);
      Topology topo;
      for (const auto& p : procs) {
        NfConfig c;
        c.kind = p.kind;
        c.listen_port = p.port;
        topo.nfs.push_back(c);
      }
      ChaosPlan plan;
      plan.targets = parse_targets(targets_spec);
      plan.repetitions = reps;
      plan.duration_s = chaos_duration;
      plan.cooldown_s = cooldown;
      plan.cpu_load_pct = cpu_pct;
      plan.memory_mib = memory_mib;
      const auto windows = run_plan(plan, topo);
      write_windows_jsonl(windows_out, windows);
      std::size_t realized = 0;
      for (const auto& w : windows) realized += w.realized ? 1 : 0;
      std::printf("%zu windows (%zu realized) -> %s\n", windows.size(),
                  realized, windows_out.c_str());
      return realized == windows.size() ? 0 : 3;
    }
    if (flood->parsed()) {
      const auto procs = state_or_die(flood_state);
      const auto kind = parse_nf_kind(flood_target);
      if (!kind) {
        std::fprintf(stderr, "unknown NF: %s\n", flood_target.c_str());
        return 2;
      }
      FloodConfig cfg;
      cfg.target_port = port_of_kind(procs, *kind);
      cfg.concurrency = concurrency;
      cfg.duration_s = flood_duration;
      cfg.seed = flood_seed;
      cfg.mode = flood_mode == "garbage" ? FloodMode::GarbageBytes
                                         : FloodMode::ValidFrame;
      const FloodReport rep = run_flood(cfg);
      std::ofstream out(flood_out);
      out << rep.to_json() << "\n";
      std::printf("attempted %llu, completed %llu, errored %llu, %.0f rps\n",
                  static_cast<unsigned long long>(rep.attempted),
                  static_cast<unsigned long long>(rep.completed),
                  static_cast<unsigned long long>(rep.errored),
                  rep.achieved_rps);
      if (!rep.error.empty()) {
        std::fprintf(stderr, "%s\n", rep.error.c_str());
        return 3;
      }
      return 0;
    }
    if (capture->parsed()) {
      const auto procs = state_or_die(capture_state);
      std::vector<CaptureEndpoint> eps;
      std::uint16_t min_port = 65535;
      for (const auto& p : procs) {
        eps.push_back({p.kind, p.port});
        min_port = std::min(min_port, p.port);
      }
      CaptureOptions opts;
      opts.observer_port = observer_port != 0
                               ? observer_port
                               : static_cast<std::uint16_t>(min_port - 1);
      const CaptureBackend be = backend == "observer"
                                    ? CaptureBackend::ExternalObserver
                                    : CaptureBackend::InlineTap;
      auto session = CaptureSession::start(be, eps, opts);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const std::int64_t end =
          now_mono_ns() + static_cast<std::int64_t>(capture_duration * 1e9);
      while (g_signal == 0 && now_mono_ns() < end) sleep_ms(100);
      CaptureResult res = session.stop();
      write_packet_feed_jsonl(pcap_out, res.records);
      std::ofstream out(stats_out);
      out << res.stats.to_json() << "\n";
      std::printf("%zu frames captured (%llu dropped) -> %s\n",
                  res.records.size(),
                  static_cast<unsigned long long>(res.stats.frames_dropped),
                  pcap_out.c_str());
      return 0;
    }
    if (monitor->parsed()) {
      const auto procs = state_or_die(monitor_state);
      std::vector<MonitorTarget> targets;
      for (const auto& p : procs) targets.push_back({p.kind, p.pid, p.port});
      ResourceMonitor mon;
      mon.start(targets, interval_ms);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const std::int64_t end =
          monitor_duration > 0.0
              ? now_mono_ns() + static_cast<std::int64_t>(monitor_duration * 1e9)
              : std::numeric_limits<std::int64_t>::max();
      while (g_signal == 0 && now_mono_ns() < end) sleep_ms(100);
      const auto samples = mon.stop();
      write_resource_csv(res_out, samples);
      std::printf("%zu resource samples -> %s\n", samples.size(),
                  res_out.c_str());
      return 0;
    }
    if (merge->parsed()) {
      const auto samples = read_samples_csv(merge_samples_path);
      const auto windows = read_windows_jsonl(merge_windows_path);
      const MergeResult m = merge_samples(samples, windows, guard);
      write_labeled_csv(labeled_out, m.labeled);
      std::printf("%s\n", m.summary_json().c_str());
      return 0;
    }
    if (anova->parsed()) {
      const auto ds = stats::load_labeled_csv(anova_in, anova_column);
      std::vector<std::vector<double>> groups;
      if (anova_by == "nf") {
        groups = ds.values_by_nf();
      } else if (anova_by == "stress") {
        for (auto& [k, v] : ds.values_by_stress()) groups.push_back(v);
      } else {
        std::fprintf(stderr, "--by must be nf or stress\n");
        return 2;
      }
      const auto result = stats::anova_oneway(groups);
      std::printf("%s", stats::format_anova(result, anova_by).c_str());
      if (!anova_out.empty()) {
        std::ofstream out(anova_out);
        out << nlohmann::json{{"ss_between", result.ss_between},
                              {"ss_within", result.ss_within},
                              {"df_between", result.df_between},
                              {"df_within", result.df_within},
                              {"f_stat", result.f_stat},
                              {"p_value", result.p_value},
                              {"exact_fit", result.exact_fit}}
                   .dump(2)
            << "\n";
      }
      return 0;
    }
    if (lmm->parsed()) {
      if (lmm_fixed != "stress" || lmm_group != "nf") {
        std::fprintf(stderr,
                     "only --fixed stress --group nf is supported\n");
        return 2;
      }
      const auto ds = stats::load_labeled_csv(lmm_in, lmm_column);
      const auto fit = stats::lmm_fit(ds);
      std::printf("%s", stats::format_lmm(fit).c_str());
      std::ofstream out(lmm_out);
      out << stats::lmm_to_json(fit) << "\n";
      return 0;
    }
    if (run->parsed()) {
      ExperimentPlan plan;
      if (!plan_path.empty()) plan = ExperimentPlan::load_file(plan_path);
      const ExperimentResult r = run_experiment(plan, out_dir);
      std::printf("experiment complete: %zu samples, %zu windows\n",
                  r.samples.size(), r.windows.size());
      std::printf("artifacts in %s (see report/summary.txt)\n",
                  r.out_dir.c_str());
      return 0;
    }
  } catch (const CLI::RuntimeError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
