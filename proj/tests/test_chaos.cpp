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

#include <cstdio>

#include "corebench/chaos.hpp"
#include "corebench/corenet/launch.hpp"
#include "corebench/telemetry/monitor.hpp"
#include "corebench/time_util.hpp"
#include "support/testnet.hpp"

using namespace corebench;
namespace ts = corebench::testsupport;

namespace {

CoreHandle one_nf(std::uint16_t port, NfKind kind = NfKind::UDM) {
  Topology t;
  NfConfig c;
  c.kind = kind;
  c.listen_port = port;
  c.work_units = 1000;
  t.nfs.push_back(c);
  return CoreHandle::up(t);
}

}  // namespace

TEST_CASE("scenario validation") {
  StressScenario s;
  s.kind = StressKind::Cpu;
  s.cpu_load_pct = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.cpu_load_pct = 101.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = StressScenario{};
  s.duration_s = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = StressScenario{};
  s.kind = StressKind::Memory;
  s.memory_mib = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("cpu injection realizes the window and raises cpu usage") {
  CoreHandle core = one_nf(8001);
  const pid_t pid = core.nfs()[0].pid;

  // Pre-window baseline: idle NF.
  const std::int64_t cpu0 = proc_cpu_ns(pid);
  sleep_ms(1500);
  const std::int64_t cpu1 = proc_cpu_ns(pid);
  const double base_pct =
      100.0 * static_cast<double>(cpu1 - cpu0) / 1e9 / 1.5;

  StressScenario sc;
  sc.kind = StressKind::Cpu;
  sc.cpu_load_pct = 50.0;
  sc.duration_s = 3.0;
  sc.target = NfKind::UDM;
  const std::int64_t cpu2 = proc_cpu_ns(pid);
  const WorkloadWindow w = inject(sc, 8001);
  const std::int64_t cpu3 = proc_cpu_ns(pid);

  CHECK(w.realized);
  const double realized_s =
      static_cast<double>(w.end_mono_ns - w.start_mono_ns) / 1e9;
  CHECK(realized_s >= 0.95 * sc.duration_s);
  CHECK(realized_s <= 1.05 * sc.duration_s);

  const double stressed_pct =
      100.0 * static_cast<double>(cpu3 - cpu2) / 1e9 / realized_s;
  CHECK(base_pct < 10.0);
  // Duty cycle 50% of one core: at least +25 points over baseline.
  CHECK(stressed_pct >= base_pct + 25.0);
  CHECK(stressed_pct <= 90.0);  // and well below a runaway spin
}

TEST_CASE("memory injection allocates the exact block and releases it") {
  CoreHandle core = one_nf(8011);
  const pid_t pid = core.nfs()[0].pid;
  sleep_ms(300);
  const auto rss_before = proc_rss_bytes(pid);

  StressScenario sc;
  sc.kind = StressKind::Memory;
  sc.memory_mib = 512;
  sc.duration_s = 2.5;
  sc.target = NfKind::UDM;

  // Sample RSS mid-window from a helper thread.
  std::uint64_t rss_during = 0;
  std::thread sampler([&] {
    sleep_ms(1200);
    rss_during = proc_rss_bytes(pid);
  });
  const WorkloadWindow w = inject(sc, 8011);
  sampler.join();

  CHECK(w.realized);
  // 512 MiB = 536,870,912 bytes, touched page by page.
  CHECK(rss_during >= rss_before + 536870912ULL * 95 / 100);

  sleep_ms(1000);  // release settles
  const auto rss_after = proc_rss_bytes(pid);
  CHECK(rss_after <= rss_before + rss_before / 10 + (8u << 20));
}

TEST_CASE("combined stress runs both workers") {
  CoreHandle core = one_nf(8021);
  const pid_t pid = core.nfs()[0].pid;
  StressScenario sc;
  sc.kind = StressKind::CpuMemory;
  sc.cpu_load_pct = 50.0;
  sc.memory_mib = 128;
  sc.duration_s = 2.0;
  sc.target = NfKind::UDM;
  const std::int64_t cpu0 = proc_cpu_ns(pid);
  const auto rss0 = proc_rss_bytes(pid);
  std::uint64_t rss_during = 0;
  std::thread sampler([&] {
    sleep_ms(1000);
    rss_during = proc_rss_bytes(pid);
  });
  const WorkloadWindow w = inject(sc, 8021);
  sampler.join();
  const std::int64_t cpu1 = proc_cpu_ns(pid);
  CHECK(w.realized);
  CHECK(rss_during >= rss0 + (128ULL << 20) * 9 / 10);
  CHECK(static_cast<double>(cpu1 - cpu0) / 1e9 >= 0.7);  // ~50% of 2 s + touch
}

TEST_CASE("unreachable control channel yields an unrealized window") {
  StressScenario sc;
  sc.kind = StressKind::Cpu;
  sc.duration_s = 0.5;
  const WorkloadWindow w = inject(sc, 8999);  // nothing listens there
  CHECK_FALSE(w.realized);
}

TEST_CASE("plan arithmetic and sequencing") {
  SUBCASE("span formula") {
    ChaosPlan p;
    p.targets = std::vector<NfKind>(kAllNfKinds.begin(), kAllNfKinds.end());
    p.repetitions = 1;
    p.duration_s = 20.0;
    p.cooldown_s = 20.0;
    CHECK(plan_span_s(p) == doctest::Approx(1200.0));
  }
  SUBCASE("empty target list gives an empty log") {
    ChaosPlan p;
    p.targets = {};
    Topology t;
    CHECK(run_plan(p, t).empty());
  }
  SUBCASE("windows are sequential and disjoint") {
    CoreHandle core = one_nf(8031);
    ChaosPlan p;
    p.targets = {NfKind::UDM};
    p.repetitions = 2;
    p.duration_s = 0.4;
    p.cooldown_s = 0.2;
    p.memory_mib = 32;
    const auto windows = run_plan(p, core.topology());
    REQUIRE(windows.size() == 6);  // 1 NF x 3 kinds x 2 reps
    for (std::size_t i = 0; i < windows.size(); ++i) {
      CHECK(windows[i].realized);
      CHECK(windows[i].end_mono_ns > windows[i].start_mono_ns);
      if (i > 0) {
        CHECK(windows[i].start_mono_ns >= windows[i - 1].end_mono_ns);
      }
    }
    CHECK(windows[0].id == "w-0000");
    CHECK(windows[5].id == "w-0005");
  }
  SUBCASE("unreachable target keeps the plan going") {
    Topology t;
    NfConfig ghost;
    ghost.kind = NfKind::CHF;
    ghost.listen_port = 8998;  // not running
    t.nfs.push_back(ghost);
    ChaosPlan p;
    p.targets = {NfKind::CHF};
    p.repetitions = 1;
    p.duration_s = 0.2;
    p.cooldown_s = 0.05;
    const auto windows = run_plan(p, t);
    REQUIRE(windows.size() == 3);
    for (const auto& w : windows) CHECK_FALSE(w.realized);
  }
}

TEST_CASE("window log round-trips through jsonl") {
  std::vector<WorkloadWindow> windows(2);
  windows[0].id = "w-0000";
  windows[0].scenario.kind = StressKind::Cpu;
  windows[0].scenario.target = NfKind::AMF;
  windows[0].start_wall_ns = 100;
  windows[0].start_mono_ns = 10;
  windows[0].end_wall_ns = 200;
  windows[0].end_mono_ns = 20;
  windows[0].realized = true;
  windows[1].id = "w-0001";
  windows[1].scenario.kind = StressKind::CpuMemory;
  windows[1].scenario.target = NfKind::UDR;
  windows[1].start_mono_ns = 30;
  windows[1].end_mono_ns = 40;

  const std::string path = ts::tmp_path("windows.jsonl");
  write_windows_jsonl(path, windows);
  const auto back = read_windows_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "w-0000");
  CHECK(back[0].scenario.kind == StressKind::Cpu);
  CHECK(back[0].realized);
  CHECK(back[1].scenario.target == NfKind::UDR);
  CHECK_FALSE(back[1].realized);
  std::remove(path.c_str());
}
