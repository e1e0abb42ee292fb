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

#include "corebench/flood.hpp"

#include <atomic>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "corebench/net.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace corebench {

void FloodConfig::validate() const {
  if (concurrency < 1) throw std::invalid_argument("flood: concurrency < 1");
  if (!(duration_s > 0.0)) throw std::invalid_argument("flood: duration <= 0");
  if (target_port == 0) throw std::invalid_argument("flood: no target port");
}

std::string FloodReport::to_json() const {
  return nlohmann::json{
      {"attempted", attempted},   {"completed", completed},
      {"errored", errored},       {"achieved_rps", achieved_rps},
      {"bytes_sent", bytes_sent}, {"wall_s", wall_s},
      {"error", error},
  }
      .dump(2);
}

namespace {

struct Counters {
  std::atomic<std::uint64_t> attempted{0};
  std::atomic<std::uint64_t> completed{0};
  std::atomic<std::uint64_t> errored{0};
  std::atomic<std::uint64_t> bytes_sent{0};
};

void worker_loop(const FloodConfig& cfg, std::int64_t end_ns, int worker_id,
                 Counters& n) {
  std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL *
                                  static_cast<std::uint64_t>(worker_id + 1)));
  std::uniform_int_distribution<int> byte(0, 255);
  Socket sock;
  std::uint64_t txn = static_cast<std::uint64_t>(worker_id) << 32;

  while (now_mono_ns() < end_ns) {
    try {
      if (!sock.valid()) sock = tcp_connect(cfg.target_port, 500);
      std::vector<std::uint8_t> wire;
      if (cfg.mode == FloodMode::ValidFrame) {
        Frame f;
        f.msg_type = msg::kRegistrationRequest;
        f.txn_id = ++txn;
        f.ue_id = "flood-" + std::to_string(rng() % 100000000);
        f.payload.resize(cfg.payload_bytes);
        for (auto& b : f.payload) b = static_cast<std::uint8_t>(byte(rng));
        wire = encode_frame(f);
      } else {
        const std::size_t blob = 16 + rng() % 64;
        wire.resize(4 + blob);
        const auto len = static_cast<std::uint32_t>(blob);
        wire[0] = static_cast<std::uint8_t>(len >> 24);
        wire[1] = static_cast<std::uint8_t>(len >> 16);
        wire[2] = static_cast<std::uint8_t>(len >> 8);
        wire[3] = static_cast<std::uint8_t>(len);
        for (std::size_t i = 4; i < wire.size(); ++i) {
          wire[i] = static_cast<std::uint8_t>(byte(rng));
        }
      }
      n.attempted.fetch_add(1, std::memory_order_relaxed);
      sock.write_all(wire, 1000);
      n.bytes_sent.fetch_add(wire.size(), std::memory_order_relaxed);
      const RecvResult r = recv_frame(sock, 5000);
      if (r.status == RecvStatus::Ok || r.status == RecvStatus::BadJson) {
        n.completed.fetch_add(1, std::memory_order_relaxed);
      } else {
        n.errored.fetch_add(1, std::memory_order_relaxed);
        sock.close_fd();
      }
    } catch (const NetError&) {
      n.errored.fetch_add(1, std::memory_order_relaxed);
      sock.close_fd();
      // Target refusing or resetting: back off a touch to avoid a pure
      // connect spin.
      sleep_ms(10);
    }
  }
}

}  // namespace

FloodReport run_flood(const FloodConfig& cfg) {
  cfg.validate();
  FloodReport rep;

  // Reachability probe; an unreachable target is a report, not a throw.
  try {
    Socket probe = tcp_connect(cfg.target_port, 1000);
  } catch (const NetError& e) {
    rep.error = std::string("target unreachable: ") + e.what();
    return rep;
  }

  Counters n;
  const std::int64_t t0 = now_mono_ns();
  const std::int64_t end_ns =
      t0 + static_cast<std::int64_t>(cfg.duration_s * 1e9);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(cfg.concurrency));
  for (int i = 0; i < cfg.concurrency; ++i) {
    workers.emplace_back(worker_loop, std::cref(cfg), end_ns, i, std::ref(n));
  }
  for (auto& w : workers) w.join();
  const double wall_s = static_cast<double>(now_mono_ns() - t0) / 1e9;

  rep.attempted = n.attempted.load();
  rep.completed = n.completed.load();
  rep.errored = n.errored.load();
  rep.bytes_sent = n.bytes_sent.load();
  rep.wall_s = wall_s;
  rep.achieved_rps =
      wall_s > 0.0 ? static_cast<double>(rep.attempted) / wall_s : 0.0;
  return rep;
}

}  // namespace corebench
