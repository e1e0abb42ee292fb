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

#include "corebench/corenet/launch.hpp"
#include "corebench/flood.hpp"
#include "corebench/net.hpp"
#include "corebench/wire.hpp"
#include "support/testnet.hpp"

using namespace corebench;

namespace {

CoreHandle single_udr(std::uint16_t port) {
  Topology t;
  NfConfig c;
  c.kind = NfKind::UDR;
  c.listen_port = port;
  c.work_units = 2000;
  c.store_size = 16;
  t.nfs.push_back(c);
  return CoreHandle::up(t);
}

}  // namespace

TEST_CASE("config validation") {
  FloodConfig bad;
  bad.target_port = 8101;
  bad.concurrency = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("target down yields an empty report with a diagnostic") {
  FloodConfig cfg;
  cfg.target_port = 8199;  // nothing there
  cfg.concurrency = 1;
  cfg.duration_s = 1.0;
  const FloodReport r = run_flood(cfg);
  CHECK(r.attempted == 0);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("valid-frame flood: report consistency and duration adherence") {
  CoreHandle core = single_udr(8101);
  FloodConfig cfg;
  cfg.target_port = 8101;
  cfg.concurrency = 4;
  cfg.duration_s = 2.0;
  cfg.mode = FloodMode::ValidFrame;
  const FloodReport r = run_flood(cfg);

  CHECK(r.attempted > 0);
  CHECK(r.completed + r.errored <= r.attempted);
  CHECK(r.completed > 0);
  // Every valid-mode request is a full registration frame; 60 bytes is a
  // conservative floor for the JSON body plus prefix.
  CHECK(r.bytes_sent >= r.attempted * 60);
  CHECK(r.achieved_rps == doctest::Approx(static_cast<double>(r.attempted) /
                                          r.wall_s));
  CHECK(r.wall_s >= 0.95 * cfg.duration_s);
  CHECK(r.wall_s <= 1.05 * cfg.duration_s + 0.2);
}

TEST_CASE("higher concurrency pushes more requests") {
  CoreHandle core = single_udr(8111);
  FloodConfig cfg;
  cfg.target_port = 8111;
  cfg.duration_s = 1.5;
  cfg.concurrency = 1;
  const FloodReport one = run_flood(cfg);
  cfg.concurrency = 16;
  const FloodReport many = run_flood(cfg);
  CHECK(many.attempted > one.attempted);
}

TEST_CASE("garbage flood exercises rejection and leaves the NF healthy") {
  CoreHandle core = single_udr(8121);
  FloodConfig cfg;
  cfg.target_port = 8121;
  cfg.concurrency = 2;
  cfg.duration_s = 1.0;
  cfg.mode = FloodMode::GarbageBytes;
  const FloodReport r = run_flood(cfg);
  CHECK(r.attempted > 0);
  CHECK(r.completed > 0);  // MALFORMED_FRAME replies count as completions

  // The parser-rejection path must not wedge the NF.
  Socket s = tcp_connect(8121, 1000);
  Frame get;
  get.msg_type = msg::kSubscriberGet;
  get.ue_id = "ue-000001";
  CHECK(request_reply(s, get, 2000).msg_type == msg::kSubscriberReply);
}
