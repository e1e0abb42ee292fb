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
#include <set>

#include "corebench/corenet/client.hpp"
#include "corebench/corenet/launch.hpp"
#include "corebench/net.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "support/testnet.hpp"

using namespace corebench;
namespace ts = corebench::testsupport;

namespace {

Topology four_nf_chain(std::uint16_t base, std::uint64_t work) {
  Topology t;
  for (NfKind k : {NfKind::AMF, NfKind::AUSF, NfKind::UDM, NfKind::UDR}) {
    NfConfig c;
    c.kind = k;
    c.listen_port = default_nf_port(k, base);
    c.work_units = work;
    c.store_size = k == NfKind::UDR ? 100 : 0;
    t.nfs.push_back(c);
  }
  return t;
}

std::set<NfKind> hop_set(const std::vector<NfKind>& hops) {
  return {hops.begin(), hops.end()};
}

}  // namespace

TEST_CASE("udr store round trip") {
  Topology t;
  NfConfig udr;
  udr.kind = NfKind::UDR;
  udr.listen_port = 7801;
  udr.work_units = 1000;
  udr.store_size = 1000;
  t.nfs.push_back(udr);
  CoreHandle core = CoreHandle::up(t);

  Socket s = tcp_connect(7801, 1000);
  Frame get;
  get.msg_type = msg::kSubscriberGet;
  get.txn_id = 1;
  get.ue_id = "ue-000123";
  Frame r = request_reply(s, get, 2000);
  CHECK(r.msg_type == msg::kSubscriberReply);
  CHECK(r.ue_id == "ue-000123");
  CHECK(r.hops == std::vector<NfKind>{NfKind::UDR});

  get.ue_id = "ue-999999";  // beyond store_size
  get.txn_id = 2;
  r = request_reply(s, get, 2000);
  CHECK(r.msg_type == msg::kSubscriberReject);
}

TEST_CASE("registration without upstream yields UPSTREAM_UNAVAILABLE") {
  Topology t = four_nf_chain(7810, 1000);
  // Start only the AMF; AUSF port stays dark.
  Topology amf_only;
  amf_only.nfs.push_back(t.get(NfKind::AMF));
  CoreHandle core = CoreHandle::up(amf_only);

  Socket s = tcp_connect(t.get(NfKind::AMF).listen_port, 1000);
  Frame req;
  req.msg_type = msg::kRegistrationRequest;
  req.txn_id = 7;
  req.ue_id = "ue-000001";
  const Frame r = request_reply(s, req, 4000);
  CHECK(r.msg_type == msg::kUpstreamUnavailable);
}

TEST_CASE("registration and pdu session flows") {
  CoreHandle core = CoreHandle::up(ts::small_topology(7820, 2000, 100));
  core.provision(64);
  UeClient ue(core.topology().get(NfKind::AMF).listen_port, 5000);

  SUBCASE("happy path covers the exact NF sets") {
    const FlowResult reg = ue.registration_flow("ue-000003", 100, {1, 2, 3});
    CHECK(reg.status == FlowStatus::Accept);
    CHECK(reg.final_msg_type == msg::kRegistrationAccept);
    CHECK(reg.hops == std::vector<NfKind>{NfKind::AMF, NfKind::AUSF,
                                          NfKind::UDM, NfKind::UDR});
    CHECK(reg.latency_ms >= 0.0);

    const FlowResult pdu = ue.pdu_session_flow("ue-000003", 100, {1, 2, 3});
    CHECK(pdu.status == FlowStatus::Accept);
    CHECK(pdu.final_msg_type == msg::kPduSessionAccept);
    CHECK(hop_set(pdu.hops) ==
          std::set<NfKind>{NfKind::AMF, NfKind::SMF, NfKind::UDM, NfKind::PCF,
                           NfKind::UPF});
  }

  SUBCASE("unprovisioned ue is rejected") {
    const FlowResult reg = ue.registration_flow("ue-777777", 101, {});
    CHECK(reg.status == FlowStatus::Reject);
    CHECK(reg.final_msg_type == msg::kRegistrationReject);
  }

  SUBCASE("pdu session for unregistered ue is rejected") {
    const FlowResult pdu = ue.pdu_session_flow("ue-000042", 102, {});
    CHECK(pdu.status == FlowStatus::Reject);
    CHECK(pdu.final_msg_type == msg::kPduSessionReject);
  }

  SUBCASE("transaction frames preserve ue identity") {
    const FlowResult reg = ue.registration_flow("ue-000005", 103, {9});
    CHECK(reg.status == FlowStatus::Accept);
    // The reply frame carried the request's ue_id back through four NFs.
  }
}

TEST_CASE("killing the UDR mid-run fails registrations") {
  CoreHandle core = CoreHandle::up(four_nf_chain(7830, 1000));
  core.provision(32);
  UeClient ue(core.topology().get(NfKind::AMF).listen_port, 3000);
  REQUIRE(ue.registration_flow("ue-000001", 1, {}).status ==
          FlowStatus::Accept);

  core.kill_nf(NfKind::UDR);
  const FlowResult reg = ue.registration_flow("ue-000001", 2, {});
  CHECK(reg.status != FlowStatus::Accept);
  // Whether the break surfaces as a fast upstream error or a deadline
  // expiry depends on timing; both are failed samples.
  CHECK((reg.status == FlowStatus::Error || reg.status == FlowStatus::Timeout));
}

TEST_CASE("malformed frame gets an error reply and the connection survives") {
  Topology t;
  NfConfig udr;
  udr.kind = NfKind::UDR;
  udr.listen_port = 7841;
  udr.work_units = 100;
  udr.store_size = 10;
  t.nfs.push_back(udr);
  CoreHandle core = CoreHandle::up(t);

  Socket s = tcp_connect(7841, 1000);
  const std::string junk = "this is not json";
  std::vector<std::uint8_t> wire;
  const auto n = static_cast<std::uint32_t>(junk.size());
  wire.push_back(n >> 24);
  wire.push_back((n >> 16) & 0xff);
  wire.push_back((n >> 8) & 0xff);
  wire.push_back(n & 0xff);
  wire.insert(wire.end(), junk.begin(), junk.end());
  s.write_all(wire, 1000);
  const RecvResult err = recv_frame(s, 2000);
  REQUIRE(err.status == RecvStatus::Ok);
  CHECK(err.frame.msg_type == msg::kMalformedFrame);

  Frame get;
  get.msg_type = msg::kSubscriberGet;
  get.txn_id = 3;
  get.ue_id = "ue-000001";
  const Frame ok = request_reply(s, get, 2000);
  CHECK(ok.msg_type == msg::kSubscriberReply);
}

TEST_CASE("port in use fails startup with a diagnostic") {
  Topology t;
  NfConfig udr;
  udr.kind = NfKind::UDR;
  udr.listen_port = 7851;
  udr.work_units = 100;
  udr.store_size = 10;
  t.nfs.push_back(udr);
  CoreHandle core = CoreHandle::up(t);

  NfConfig dup = udr;
  CHECK_THROWS_WITH_AS(start_nf(dup, t), doctest::Contains("port in use"),
                       std::runtime_error);
}

TEST_CASE("nrf records startup registrations") {
  Topology t;
  for (NfKind k : {NfKind::NRF, NfKind::UDR}) {
    NfConfig c;
    c.kind = k;
    c.listen_port = default_nf_port(k, 7860);
    c.work_units = 100;
    c.store_size = k == NfKind::UDR ? 10 : 0;
    t.nfs.push_back(c);
  }
  CoreHandle core = CoreHandle::up(t);
  sleep_ms(300);  // registration retries settle

  Socket s = tcp_connect(t.get(NfKind::NRF).listen_port, 1000);
  Frame disc;
  disc.msg_type = msg::kNfDiscover;
  const std::string body = "{\"kind\":\"UDR\"}";
  disc.payload.assign(body.begin(), body.end());
  const Frame r = request_reply(s, disc, 2000);
  CHECK(r.msg_type == msg::kNfDiscoverReply);
  const std::string reply(r.payload.begin(), r.payload.end());
  CHECK(reply.find(std::to_string(t.get(NfKind::UDR).listen_port)) !=
        std::string::npos);
}

TEST_CASE("work units scale median handling time") {
  const auto median_reg_ms = [](std::uint16_t base, std::uint64_t work) {
    CoreHandle core = CoreHandle::up(four_nf_chain(base, work));
    core.provision(16);
    UeClient ue(core.topology().get(NfKind::AMF).listen_port, 8000);
    std::vector<double> lat;
    for (int i = 0; i < 11; ++i) {
      const FlowResult r =
          ue.registration_flow("ue-000001", 1000 + static_cast<std::uint64_t>(i), {5});
      REQUIRE(r.status == FlowStatus::Accept);
      lat.push_back(r.latency_ms);
    }
    std::sort(lat.begin(), lat.end());
    return lat[lat.size() / 2];
  };
  const double fast = median_reg_ms(7870, 1);
  const double slow = median_reg_ms(7880, 1'000'000);
  // 7 work invocations at ~10 ms each dominate any scheduling noise.
  CHECK(slow > fast);
  CHECK(slow > 30.0);
}
