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

#include <cmath>
#include <cstdio>

#include "corebench/corenet/launch.hpp"
#include "corebench/sensor.hpp"
#include "support/testnet.hpp"

using namespace corebench;
namespace ts = corebench::testsupport;

TEST_CASE("summarize oracles") {
  SUBCASE("constant values") {
    const DescriptiveStats s = summarize_values({100, 100, 100});
    CHECK(s.mean_ms == doctest::Approx(100.0));
    CHECK(s.std_ms == 0.0);
  }
  SUBCASE("hand-computed standard deviation sqrt(5/3)") {
    const DescriptiveStats s = summarize_values({1, 2, 3, 4});
    CHECK(s.mean_ms == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(s.std_ms == doctest::Approx(1.2909944487358056).epsilon(1e-9));
    CHECK(s.median_ms == 2.0);  // nearest rank: ceil(0.5*4) = 2nd value
    CHECK(s.p95_ms == 4.0);
  }
  SUBCASE("single value is degenerate") {
    const DescriptiveStats s = summarize_values({5});
    CHECK(s.mean_ms == 5.0);
    CHECK(s.std_ms == 0.0);
    CHECK(s.degenerate_n);
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(summarize_values({}), std::invalid_argument);
  }
  SUBCASE("report format anchor") {
    DescriptiveStats s;
    s.mean_ms = 451.46;
    s.std_ms = 7.80;
    CHECK(format_descriptive(s) == "451.46 ms (standard deviation: 7.80 ms)");
  }
}

TEST_CASE("sensor config validation") {
  SensorConfig bad;
  bad.rate_hz = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SensorConfig{};
  bad.ue_pool = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sensor aborts when the core is unreachable") {
  SensorConfig cfg;
  cfg.rate_hz = 1.0;
  cfg.duration_s = 1.0;
  CHECK_THROWS_AS(run_sensor(cfg, 7999), std::runtime_error);
}

TEST_CASE("sensor emits exactly floor(rate*duration) samples") {
  CoreHandle core = CoreHandle::up(ts::small_topology(7900, 1000, 100));
  core.provision(32);
  const std::uint16_t amf = core.topology().get(NfKind::AMF).listen_port;

  SensorConfig cfg;
  cfg.rate_hz = 4.0;
  cfg.duration_s = 5.0;
  cfg.ue_pool = 8;
  auto samples = run_sensor(cfg, amf);
  CHECK(samples.size() == 20);

  cfg.rate_hz = 2.5;
  cfg.duration_s = 3.0;  // floor(7.5) = 7
  samples = run_sensor(cfg, amf);
  CHECK(samples.size() == 7);
  for (const auto& s : samples) {
    CHECK(s.outcome == SampleOutcome::Success);
    CHECK(s.total_ms >= 0.0);
    CHECK(s.reg_ms >= 0.0);
    CHECK(s.pdu_ms >= 0.0);
  }
}

TEST_CASE("open-loop schedule holds and seq tracks send time") {
  CoreHandle core = CoreHandle::up(ts::small_topology(7910, 1000, 100));
  core.provision(16);
  const std::uint16_t amf = core.topology().get(NfKind::AMF).listen_port;

  SensorConfig cfg;
  cfg.rate_hz = 10.0;
  cfg.duration_s = 3.0;
  cfg.ue_pool = 8;
  const auto samples = run_sensor(cfg, amf);
  REQUIRE(samples.size() == 30);

  const double period_ms = 100.0;
  std::size_t on_time = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].seq == i);
    if (i > 0) CHECK(samples[i].mono_ts_ns > samples[i - 1].mono_ts_ns);
    CHECK(samples[i].sched_lag_ms >= 0.0);
    if (samples[i].sched_lag_ms < 0.1 * period_ms) ++on_time;
  }
  CHECK(static_cast<double>(on_time) >=
        0.99 * static_cast<double>(samples.size()));
}

TEST_CASE("mid-run failures become timeout samples, count still exact") {
  // AMF alone: flows fail upstream but the schedule never skips a send.
  Topology t;
  NfConfig amf;
  amf.kind = NfKind::AMF;
  amf.listen_port = 7921;
  amf.work_units = 100;
  amf.upstream_timeout_ms = 300;
  t.nfs.push_back(amf);
  CoreHandle core = CoreHandle::up(t);

  SensorConfig cfg;
  cfg.rate_hz = 5.0;
  cfg.duration_s = 2.0;
  cfg.timeout_ms = 1500;
  const auto samples = run_sensor(cfg, 7921);
  REQUIRE(samples.size() == 10);
  for (const auto& s : samples) {
    CHECK(s.outcome == SampleOutcome::Timeout);
  }
  const DescriptiveStats stats = summarize(samples);
  CHECK(stats.success_rate == 0.0);
}

TEST_CASE("sample log round-trips through csv") {
  std::vector<RegistrationSample> samples;
  RegistrationSample a;
  a.seq = 0;
  a.ue_id = "ue-000001";
  a.wall_ts_ns = 123456789;
  a.mono_ts_ns = 1000;
  a.reg_ms = 10.5;
  a.pdu_ms = 12.25;
  a.total_ms = 22.75;
  a.outcome = SampleOutcome::Success;
  a.sched_lag_ms = 0.125;
  samples.push_back(a);
  RegistrationSample b;
  b.seq = 1;
  b.ue_id = "ue-000002";
  b.wall_ts_ns = 123456999;
  b.mono_ts_ns = 2000;
  b.outcome = SampleOutcome::Timeout;  // absent phase latencies
  b.total_ms = 1500.0;
  samples.push_back(b);

  const std::string path = ts::tmp_path("samples.csv");
  write_samples_csv(path, samples);
  const auto back = read_samples_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].ue_id == "ue-000001");
  CHECK(back[0].reg_ms == doctest::Approx(10.5));
  CHECK(back[0].outcome == SampleOutcome::Success);
  CHECK(back[1].reg_ms < 0.0);
  CHECK(back[1].outcome == SampleOutcome::Timeout);
  std::remove(path.c_str());
}
