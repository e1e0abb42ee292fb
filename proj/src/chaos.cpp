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

#include "corebench/chaos.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "corebench/net.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace corebench {

void StressScenario::validate() const {
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("scenario: duration_s <= 0");
  }
  const bool uses_cpu =
      kind == StressKind::Cpu || kind == StressKind::CpuMemory;
  if (uses_cpu && !(cpu_load_pct > 0.0 && cpu_load_pct <= 100.0)) {
    throw std::invalid_argument("scenario: cpu_load_pct outside (0,100]");
  }
  const bool uses_mem =
      kind == StressKind::Memory || kind == StressKind::CpuMemory;
  if (uses_mem && memory_mib == 0) {
    throw std::invalid_argument("scenario: memory_mib == 0");
  }
}

WorkloadWindow inject(const StressScenario& scenario,
                      std::uint16_t control_port) {
  scenario.validate();
  WorkloadWindow w;
  w.scenario = scenario;
  w.start_wall_ns = now_wall_ns();
  w.start_mono_ns = now_mono_ns();

  nlohmann::json params{
      {"kind", std::string(to_string(scenario.kind))},
      {"cpu_load_pct", scenario.cpu_load_pct},
      {"memory_mib", scenario.memory_mib},
      // Safety stop in case this injector dies before sending STRESS_STOP.
      {"max_duration_s",
       static_cast<std::int64_t>(scenario.duration_s) + 10},
  };
  try {
    Socket ctl = tcp_connect(control_port, 1000);
    Frame start;
    start.msg_type = msg::kStressStart;
    const std::string body = params.dump();
    start.payload.assign(body.begin(), body.end());
    if (request_reply(ctl, start, 2000).msg_type != msg::kStressStartAck) {
      return w;  // realized stays false
    }
    w.start_wall_ns = now_wall_ns();
    w.start_mono_ns = now_mono_ns();
    sleep_until_mono_ns(w.start_mono_ns +
                        static_cast<std::int64_t>(scenario.duration_s * 1e9));
    Frame stop;
    stop.msg_type = msg::kStressStop;
    const bool stopped =
        request_reply(ctl, stop, 2000).msg_type == msg::kStressStopAck;
    w.end_wall_ns = now_wall_ns();
    w.end_mono_ns = now_mono_ns();
    w.realized = stopped;
  } catch (const NetError&) {
    if (w.end_mono_ns == 0) {
      w.end_wall_ns = now_wall_ns();
      w.end_mono_ns = now_mono_ns();
    }
    w.realized = false;
  }
  return w;
}

double plan_span_s(const ChaosPlan& plan) {
  const double per_window = plan.duration_s + plan.cooldown_s;
  return per_window * static_cast<double>(plan.targets.size()) *
         static_cast<double>(plan.kinds.size()) *
         static_cast<double>(plan.repetitions);
}

std::vector<WorkloadWindow> run_plan(const ChaosPlan& plan,
                                     const Topology& topo) {
  std::vector<WorkloadWindow> log;
  std::size_t index = 0;
  for (NfKind target : plan.targets) {
    for (StressKind kind : plan.kinds) {
      for (int rep = 0; rep < plan.repetitions; ++rep) {
        StressScenario sc;
        sc.kind = kind;
        sc.cpu_load_pct = plan.cpu_load_pct;
        sc.memory_mib = plan.memory_mib;
        sc.duration_s = plan.duration_s;
        sc.target = target;

        const auto port = topo.port_of(target);
        WorkloadWindow w;
        if (port) {
          w = inject(sc, *port);
        } else {
          w.scenario = sc;
          w.start_wall_ns = now_wall_ns();
          w.start_mono_ns = now_mono_ns();
          w.end_wall_ns = w.start_wall_ns;
          w.end_mono_ns = w.start_mono_ns;
        }
        char id[24];
        std::snprintf(id, sizeof(id), "w-%04zu", index++);
        w.id = id;
        log.push_back(w);
        sleep_until_mono_ns(now_mono_ns() +
                            static_cast<std::int64_t>(plan.cooldown_s * 1e9));
      }
    }
  }
  return log;
}

namespace {

nlohmann::json window_to_json(const WorkloadWindow& w) {
  return {
      {"id", w.id},
      {"target", std::string(to_string(w.scenario.target))},
      {"kind", std::string(to_string(w.scenario.kind))},
      {"cpu_load_pct", w.scenario.cpu_load_pct},
      {"memory_mib", w.scenario.memory_mib},
      {"duration_s", w.scenario.duration_s},
      {"start_wall_ns", w.start_wall_ns},
      {"start_mono_ns", w.start_mono_ns},
      {"end_wall_ns", w.end_wall_ns},
      {"end_mono_ns", w.end_mono_ns},
      {"realized", w.realized},
  };
}

WorkloadWindow window_from_json(const nlohmann::json& j) {
  WorkloadWindow w;
  w.id = j.at("id").get<std::string>();
  const auto target = parse_nf_kind(j.at("target").get<std::string>());
  const auto kind = parse_stress_kind(j.at("kind").get<std::string>());
  if (!target || !kind) {
    throw std::runtime_error("window log: bad target/kind");
  }
  w.scenario.target = *target;
  w.scenario.kind = *kind;
  w.scenario.cpu_load_pct = j.value("cpu_load_pct", 50.0);
  w.scenario.memory_mib = j.value("memory_mib", std::size_t{512});
  w.scenario.duration_s = j.value("duration_s", 20.0);
  w.start_wall_ns = j.at("start_wall_ns").get<std::int64_t>();
  w.start_mono_ns = j.at("start_mono_ns").get<std::int64_t>();
  w.end_wall_ns = j.at("end_wall_ns").get<std::int64_t>();
  w.end_mono_ns = j.at("end_mono_ns").get<std::int64_t>();
  w.realized = j.value("realized", false);
  return w;
}

}  // namespace

void write_windows_jsonl(const std::string& path,
                         const std::vector<WorkloadWindow>& windows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& w : windows) out << window_to_json(w).dump() << "\n";
}

std::vector<WorkloadWindow> read_windows_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<WorkloadWindow> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(window_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace corebench
