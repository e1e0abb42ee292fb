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

#include <algorithm>
#include <map>
#include <set>

#include "corebench/corenet/client.hpp"
#include "corebench/corenet/launch.hpp"
#include "corebench/hex.hpp"
#include "corebench/telemetry/capture.hpp"
#include "corebench/telemetry/detect.hpp"
#include "corebench/telemetry/monitor.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "support/testnet.hpp"

using namespace corebench;
namespace ts = corebench::testsupport;

namespace {

// Deterministic mini-workload: n registration+session transactions.
void replay_transactions(std::uint16_t amf_port, int n) {
  for (int i = 0; i < n; ++i) {
    UeClient ue(amf_port, 5000);
    char id[16];
    std::snprintf(id, sizeof(id), "%06d", i % 16);
    const std::string ue_id = std::string("ue-") + id;
    std::vector<std::uint8_t> payload(16,
                                      static_cast<std::uint8_t>(i & 0xff));
    const auto reg = ue.registration_flow(
        ue_id, static_cast<std::uint64_t>(i) + 1, payload);
    REQUIRE(reg.status == FlowStatus::Accept);
    const auto pdu = ue.pdu_session_flow(
        ue_id, static_cast<std::uint64_t>(i) + 1, payload);
    REQUIRE(pdu.status == FlowStatus::Accept);
  }
}

std::vector<CaptureEndpoint> endpoints(const CoreHandle& core) {
  std::vector<CaptureEndpoint> eps;
  for (const auto& p : core.nfs()) eps.push_back({p.kind, p.port});
  return eps;
}

using FrameKey = std::tuple<std::string, std::string, std::uint32_t>;

std::multiset<FrameKey> frame_multiset(const std::vector<PacketRecord>& recs) {
  std::multiset<FrameKey> out;
  for (const auto& r : recs) {
    out.insert({r.src_nf, r.dst_nf, r.length_bytes});
  }
  return out;
}

}  // namespace

TEST_CASE("monitor samples idle NFs with near-zero cpu") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8200, 1000, 50));
  std::vector<MonitorTarget> targets;
  for (const auto& p : core.nfs()) targets.push_back({p.kind, p.pid, p.port});

  ResourceMonitor mon;
  mon.start(targets, 500);
  sleep_ms(3200);
  const auto samples = mon.stop();

  std::map<NfKind, int> counts;
  std::map<NfKind, double> cpu_sum;
  std::map<NfKind, std::uint64_t> last_rx;
  for (const auto& s : samples) {
    counts[s.nf]++;
    cpu_sum[s.nf] += s.cpu_pct;
    CHECK(s.rss_bytes > 0);
    CHECK(s.cpu_pct >= 0.0);
    auto it = last_rx.find(s.nf);
    if (it != last_rx.end()) CHECK(s.net_rx_bytes >= it->second);
    last_rx[s.nf] = s.net_rx_bytes;
  }
  for (const auto& [nf, n] : counts) {
    CHECK(n >= 5);
    CHECK(cpu_sum[nf] / n < 5.0);  // idle mean under 5% of a core
  }
}

TEST_CASE("monitor flags an exited NF and keeps sampling the rest") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8210, 1000, 50));
  std::vector<MonitorTarget> targets;
  for (const auto& p : core.nfs()) targets.push_back({p.kind, p.pid, p.port});
  ResourceMonitor mon;
  mon.start(targets, 300);
  sleep_ms(700);
  core.kill_nf(NfKind::CHF);
  sleep_ms(1500);
  const auto samples = mon.stop();

  bool saw_dead_chf = false;
  std::int64_t chf_dead_ts = 0;
  std::int64_t last_amf_ts = 0;
  for (const auto& s : samples) {
    if (s.nf == NfKind::CHF && !s.alive) {
      saw_dead_chf = true;
      chf_dead_ts = s.ts_ns;
    }
    if (s.nf == NfKind::AMF) last_amf_ts = s.ts_ns;
  }
  CHECK(saw_dead_chf);
  CHECK(last_amf_ts > chf_dead_ts);  // stream continued for others
}

TEST_CASE("net counters rise across a transaction run") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8220, 1000, 50));
  core.provision(16);
  std::vector<MonitorTarget> targets;
  for (const auto& p : core.nfs()) targets.push_back({p.kind, p.pid, p.port});
  ResourceMonitor mon;
  mon.start(targets, 400);
  sleep_ms(900);
  replay_transactions(core.topology().get(NfKind::AMF).listen_port, 30);
  sleep_ms(900);
  const auto samples = mon.stop();

  std::vector<std::uint64_t> amf_rx;
  for (const auto& s : samples) {
    if (s.nf == NfKind::AMF) amf_rx.push_back(s.net_rx_bytes);
  }
  REQUIRE(amf_rx.size() >= 3);
  CHECK(std::is_sorted(amf_rx.begin(), amf_rx.end()));
  CHECK(amf_rx.back() > amf_rx.front());
}

TEST_CASE("inline capture feeds parseable hex records") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8230, 1000, 50));
  core.provision(16);
  CaptureOptions opts;
  auto session = CaptureSession::start(CaptureBackend::InlineTap,
                                       endpoints(core), opts);
  replay_transactions(core.topology().get(NfKind::AMF).listen_port, 20);
  sleep_ms(300);
  CaptureResult cap = session.stop();

  CHECK(cap.stats.frames_dropped == 0);
  REQUIRE_FALSE(cap.records.empty());
  // 20 transactions, 16 NF-received frames each (9 requests + 7 upstream
  // replies; the two UE-bound accepts are not NF-received).
  CHECK(cap.records.size() == 20 * 16);

  std::map<std::uint64_t, std::set<std::string>> ue_by_txn;
  std::size_t ue_sourced = 0;
  for (const auto& r : cap.records) {
    CHECK(r.payload_hex.size() == 2 * r.length_bytes);
    CHECK(r.payload_hex.find_first_not_of("0123456789abcdef") ==
          std::string::npos);
    // Hex round trip reproduces the captured frame body exactly.
    const auto body = hex_decode(r.payload_hex);
    const Frame f = decode_frame_body(body);
    ue_by_txn[f.txn_id].insert(f.ue_id);
    if (r.src_nf == "UE") ++ue_sourced;
  }
  // Transaction integrity: one ue_id per txn across all captured frames.
  for (const auto& [txn, ues] : ue_by_txn) {
    CHECK(ues.size() == 1);
  }
  CHECK(ue_sourced == 20 * 2);  // both UE-originated requests per txn
}

TEST_CASE("capture parity: both backends see the same frame multiset") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8240, 1000, 50));
  core.provision(16);
  const std::uint16_t amf = core.topology().get(NfKind::AMF).listen_port;

  CaptureOptions opts;
  auto inline_session =
      CaptureSession::start(CaptureBackend::InlineTap, endpoints(core), opts);
  replay_transactions(amf, 25);
  sleep_ms(300);
  const CaptureResult inline_cap = inline_session.stop();

  CaptureOptions obs_opts;
  obs_opts.observer_port = 8240;  // base port is free
  auto obs_session = CaptureSession::start(CaptureBackend::ExternalObserver,
                                           endpoints(core), obs_opts);
  replay_transactions(amf, 25);
  sleep_ms(300);
  const CaptureResult obs_cap = obs_session.stop();

  CHECK(inline_cap.stats.frames_dropped == 0);
  CHECK(obs_cap.stats.frames_dropped == 0);
  CHECK(inline_cap.records.size() == obs_cap.records.size());
  CHECK(frame_multiset(inline_cap.records) ==
        frame_multiset(obs_cap.records));
}

TEST_CASE("capture does not disturb sensor success") {
  CoreHandle core = CoreHandle::up(ts::small_topology(8250, 1000, 50));
  core.provision(16);
  const std::uint16_t amf = core.topology().get(NfKind::AMF).listen_port;

  replay_transactions(amf, 15);  // capture off: asserts Accept internally

  auto session = CaptureSession::start(CaptureBackend::InlineTap,
                                       endpoints(core), CaptureOptions{});
  replay_transactions(amf, 15);  // capture on: same asserts
  session.stop();
}

TEST_CASE("rate-threshold detector") {
  const auto mk = [](const std::string& dst, int n) {
    std::vector<PacketRecord> v;
    for (int i = 0; i < n; ++i) {
      PacketRecord r;
      r.ts_ns = i;
      r.src_nf = "UE";
      r.dst_nf = dst;
      r.length_bytes = 100;
      v.push_back(r);
    }
    return v;
  };
  // Sensor at 2 Hz: nominal AMF inbound is 8 fps, threshold 80 fps.
  const auto det = RateThresholdDetector::for_sensor_rate(2.0);
  CHECK(det.threshold_fps() == doctest::Approx(80.0));

  const auto normal = mk("AMF", 80);  // 8 fps over a 10 s window
  CHECK(det.classify(normal, 10.0) == TrafficVerdict::Normal);

  const auto flood = mk("AMF", 5000);  // 500 fps over 10 s
  CHECK(det.classify(flood, 10.0) == TrafficVerdict::DDoS);

  SUBCASE("adding flood frames keeps the verdict") {
    auto mixed = flood;
    const auto extra = mk("AMF", 1000);
    mixed.insert(mixed.end(), extra.begin(), extra.end());
    CHECK(det.classify(mixed, 10.0) == TrafficVerdict::DDoS);
  }
  SUBCASE("empty window is an error") {
    CHECK_THROWS_AS(det.classify({}, 10.0), std::invalid_argument);
  }
  SUBCASE("rate is per destination, not total") {
    std::vector<PacketRecord> spread;
    for (NfKind k : kAllNfKinds) {
      const auto chunk = mk(std::string(to_string(k)), 500);  // 50 fps each
      spread.insert(spread.end(), chunk.begin(), chunk.end());
    }
    CHECK(det.classify(spread, 10.0) == TrafficVerdict::Normal);
  }
}

TEST_CASE("packet feed round-trips through jsonl") {
  std::vector<PacketRecord> recs(2);
  recs[0].ts_ns = 5;
  recs[0].src_nf = "UE";
  recs[0].dst_nf = "AMF";
  recs[0].length_bytes = 2;
  recs[0].payload_hex = "dead";
  recs[1].ts_ns = 9;
  recs[1].src_nf = "AMF";
  recs[1].dst_nf = "AUSF";
  recs[1].length_bytes = 1;
  recs[1].payload_hex = "7f";

  const std::string path = ts::tmp_path("pcap.jsonl");
  write_packet_feed_jsonl(path, recs);
  const auto back = read_packet_feed_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].payload_hex == "dead");
  CHECK(back[1].dst_nf == "AUSF");
  std::remove(path.c_str());
}
