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

#ifndef COREBENCH_CORENET_SERVER_HPP_
#define COREBENCH_CORENET_SERVER_HPP_

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>

#include "corebench/corenet/config.hpp"
#include "corebench/corenet/stress.hpp"
#include "corebench/corenet/work.hpp"
#include "corebench/net.hpp"
#include "corebench/telemetry/tap.hpp"
#include "corebench/wire.hpp"

namespace corebench {

/// One network function: a TCP server speaking the frame protocol. Handles
/// connections concurrently; CPU-bound frame work is serialized through the
/// NF's work lane. Normally hosted by the corebench-nfd process (one NF per
/// OS process so resource accounting attributes honestly); it can also be
/// embedded in-process for protocol-level tests.
class NfServer {
 public:
  NfServer(NfConfig cfg, Topology topo);
  ~NfServer();

  /// Binds the listener (throws NetError "port in use: N" when taken),
  /// pre-seeds the UDR store, kicks off NRF registration, starts serving.
  void start();
  void stop();
  bool stop_requested() const { return stop_.load(); }
  /// Blocks until stop() (SHUTDOWN frame or signal handler) is requested.
  void wait();

  std::uint16_t port() const { return cfg_.listen_port; }
  const NfConfig& config() const { return cfg_; }

  /// The STATS_REPLY payload as a JSON string (also used in-process).
  std::string stats_json() const;

 private:
  struct ConnCtx {
    std::map<NfKind, Socket> upstreams;
  };
  struct ForwardOutcome {
    bool ok = false;
    Frame reply;
  };

  void accept_loop();
  void conn_loop(Socket sock);
  bool wait_readable(int fd, int timeout_ms) const;
  void send_counted(Socket& sock, const Frame& f);
  void register_with_nrf();

  Frame handle_data(Frame f, ConnCtx& ctx);
  Frame handle_control(const Frame& f);
  ForwardOutcome forward(ConnCtx& ctx, NfKind peer, Frame req);
  void do_work(const Frame& f);
  void mirror_inbound(std::uint8_t src, std::span<const std::uint8_t> raw);

  Frame reply_to(const Frame& req, const char* msg_type) const;

  NfConfig cfg_;
  Topology topo_;
  TcpListener listener_;
  WorkLane lane_;
  StressController stress_{lane_};
  CaptureTap tap_;

  std::thread accept_thread_;
  std::thread nrf_thread_;
  std::atomic<bool> stop_{false};

  mutable std::mutex conns_mu_;
  std::set<int> conn_fds_;
  std::atomic<int> active_conns_{0};
  std::condition_variable conns_cv_;

  // NF-local stores, each behind the store mutex.
  mutable std::mutex store_mu_;
  std::unordered_set<std::string> subscriber_store_;  // UDR
  std::unordered_set<std::string> registered_ues_;    // AMF
  std::map<NfKind, std::uint16_t> nrf_registry_;      // NRF

  std::atomic<std::uint64_t> net_rx_{0};
  std::atomic<std::uint64_t> net_tx_{0};
  std::atomic<std::uint64_t> frames_handled_{0};

  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
};

}  // namespace corebench

#endif  // COREBENCH_CORENET_SERVER_HPP_
