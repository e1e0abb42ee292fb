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

#include "corebench/corenet/server.hpp"

#include <poll.h>
#include <sys/socket.h>

#include <cstdio>

#include "corebench/time_util.hpp"
#include "json.hpp"

namespace corebench {

namespace {

constexpr int kMaxConns = 512;
constexpr int kConnIdleTimeoutMs = 120'000;
constexpr int kFrameReadTimeoutMs = 3000;

bool is_control(const std::string& m) {
  return m == msg::kPing || m == msg::kProvision || m == msg::kStressStart ||
         m == msg::kStressStop || m == msg::kStatsGet ||
         m == msg::kCaptureStart || m == msg::kCaptureStop ||
         m == msg::kShutdown;
}

std::string pad_ue_id(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", i);
  return prefix + buf;
}

std::vector<std::uint8_t> digest_payload(std::uint64_t digest) {
  std::vector<std::uint8_t> out(8);
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(digest >> (56 - 8 * i));
  }
  return out;
}

}  // namespace

NfServer::NfServer(NfConfig cfg, Topology topo)
    : cfg_(cfg), topo_(std::move(topo)) {}

NfServer::~NfServer() { stop(); }

void NfServer::start() {
  listener_ = TcpListener(cfg_.listen_port);  // throws "port in use: N"
  if (cfg_.kind == NfKind::UDR) {
    std::lock_guard lk(store_mu_);
    for (std::size_t i = 0; i < cfg_.store_size; ++i) {
      subscriber_store_.insert(pad_ue_id("ue-", i));
    }
  }
  stop_.store(false);
  accept_thread_ = std::thread([this] { accept_loop(); });
  nrf_thread_ = std::thread([this] { register_with_nrf(); });
}

void NfServer::stop() {
  if (stop_.exchange(true)) {
    // Idempotent; first caller does the teardown.
  }
  stop_cv_.notify_all();
  if (accept_thread_.joinable()) accept_thread_.join();
  if (nrf_thread_.joinable()) nrf_thread_.join();
  {
    // Unblock connection threads stuck mid-read.
    std::lock_guard lk(conns_mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  {
    std::unique_lock lk(conns_mu_);
    conns_cv_.wait_for(lk, std::chrono::seconds(5),
                       [this] { return active_conns_.load() == 0; });
  }
  stress_.stop();
  tap_.disable();
}

void NfServer::wait() {
  std::unique_lock lk(stop_mu_);
  stop_cv_.wait(lk, [this] { return stop_.load(); });
}

bool NfServer::wait_readable(int fd, int timeout_ms) const {
  const std::int64_t deadline = now_mono_ns() + timeout_ms * 1'000'000LL;
  while (!stop_.load(std::memory_order_relaxed)) {
    const std::int64_t remain = deadline - now_mono_ns();
    if (remain <= 0) return false;
    pollfd p{fd, POLLIN, 0};
    const int rc =
        poll(&p, 1, static_cast<int>(std::min<std::int64_t>(remain / 1'000'000, 250)));
    if (rc > 0) return true;
  }
  return false;
}

void NfServer::accept_loop() {
  while (!stop_.load()) {
    Socket conn = listener_.accept_conn(250);
    if (!conn.valid()) continue;
    if (active_conns_.load() >= kMaxConns) continue;  // refuse; RAII closes
    const int fd = conn.fd();
    {
      std::lock_guard lk(conns_mu_);
      conn_fds_.insert(fd);
    }
    active_conns_.fetch_add(1);
    std::thread([this, c = std::move(conn)]() mutable {
      conn_loop(std::move(c));
    }).detach();
  }
}

void NfServer::send_counted(Socket& sock, const Frame& f) {
  const auto wire = encode_frame(f);
  sock.write_all(wire, kFrameReadTimeoutMs);
  net_tx_.fetch_add(wire.size(), std::memory_order_relaxed);
}

void NfServer::mirror_inbound(std::uint8_t src,
                              std::span<const std::uint8_t> raw) {
  if (tap_.active()) {
    tap_.mirror(src, static_cast<std::uint8_t>(nf_index(cfg_.kind)), raw);
  }
}

Frame NfServer::reply_to(const Frame& req, const char* msg_type) const {
  Frame r;
  r.msg_type = msg_type;
  r.txn_id = req.txn_id;
  r.ue_id = req.ue_id;
  r.hops = req.hops;
  r.payload = req.payload;
  return r;
}

void NfServer::do_work(const Frame& f) {
  if (cfg_.work_units == 0) return;
  lane_.run(f.payload, cfg_.work_units);
}

void NfServer::conn_loop(Socket sock) {
  ConnCtx ctx;
  const int fd = sock.fd();
  while (!stop_.load()) {
    if (!wait_readable(fd, kConnIdleTimeoutMs)) break;
    RecvResult r;
    try {
      r = recv_frame(sock, kFrameReadTimeoutMs);
    } catch (const NetError&) {
      break;  // reset, timeout mid-frame, truncated
    }
    if (r.status == RecvStatus::Eof) break;
    net_rx_.fetch_add(4 + r.raw_body.size(), std::memory_order_relaxed);
    if (r.status == RecvStatus::Oversize) {
      Frame err;
      err.msg_type = msg::kMalformedFrame;
      try {
        send_counted(sock, err);
      } catch (const NetError&) {
      }
      break;  // framing is unrecoverable
    }
    if (r.status == RecvStatus::BadJson) {
      Frame err;
      err.msg_type = msg::kMalformedFrame;
      try {
        send_counted(sock, err);
      } catch (const NetError&) {
        break;
      }
      continue;  // connection stays usable
    }

    frames_handled_.fetch_add(1, std::memory_order_relaxed);
    Frame reply;
    if (is_control(r.frame.msg_type)) {
      reply = handle_control(r.frame);
    } else {
      const std::uint8_t src = r.frame.hops.empty()
                                   ? kUePeerId
                                   : static_cast<std::uint8_t>(
                                         nf_index(r.frame.hops.back()));
      mirror_inbound(src, r.raw_body);
      reply = handle_data(std::move(r.frame), ctx);
    }
    const bool is_shutdown = reply.msg_type == msg::kShutdownAck;
    try {
      send_counted(sock, reply);
    } catch (const NetError&) {
      break;
    }
    if (is_shutdown) {
      stop_.store(true);
      stop_cv_.notify_all();
      break;
    }
  }
  {
    std::lock_guard lk(conns_mu_);
    conn_fds_.erase(fd);
  }
  active_conns_.fetch_sub(1);
  conns_cv_.notify_all();
}

NfServer::ForwardOutcome NfServer::forward(ConnCtx& ctx, NfKind peer,
                                           Frame req) {
  ForwardOutcome out;
  const auto port = topo_.port_of(peer);
  if (!port) return out;

  const auto wire = encode_frame(req);
  bool sent = false;
  // A cached upstream connection may be stale (peer restarted); retry the
  // send once on a fresh connection. No retry after a send succeeded.
  for (int attempt = 0; attempt < 2 && !sent; ++attempt) {
    try {
      auto it = ctx.upstreams.find(peer);
      if (it == ctx.upstreams.end() || !it->second.valid()) {
        ctx.upstreams[peer] = tcp_connect(*port, 1000);
        it = ctx.upstreams.find(peer);
      }
      it->second.write_all(wire, 1000);
      net_tx_.fetch_add(wire.size(), std::memory_order_relaxed);
      sent = true;
    } catch (const NetError&) {
      ctx.upstreams.erase(peer);
    }
  }
  if (!sent) return out;

  Socket& up = ctx.upstreams[peer];
  if (!wait_readable(up.fd(), cfg_.upstream_timeout_ms)) {
    ctx.upstreams.erase(peer);
    return out;
  }
  RecvResult r;
  try {
    r = recv_frame(up, cfg_.upstream_timeout_ms);
  } catch (const NetError&) {
    ctx.upstreams.erase(peer);
    return out;
  }
  if (r.status != RecvStatus::Ok) {
    ctx.upstreams.erase(peer);
    return out;
  }
  net_rx_.fetch_add(4 + r.raw_body.size(), std::memory_order_relaxed);
  if (!is_error_reply(r.frame.msg_type)) {
    mirror_inbound(static_cast<std::uint8_t>(nf_index(peer)), r.raw_body);
    do_work(r.frame);  // replies are inbound frames too
  }
  out.ok = true;
  out.reply = std::move(r.frame);
  return out;
}

Frame NfServer::handle_data(Frame f, ConnCtx& ctx) {
  do_work(f);
  const std::string& m = f.msg_type;
  const NfKind self = cfg_.kind;

  // Registration path: UE -> AMF -> AUSF -> UDM -> UDR.
  if (m == msg::kRegistrationRequest && self == NfKind::AMF) {
    f.hops.push_back(self);
    Frame req = f;
    req.msg_type = msg::kAuthRequest;
    auto up = forward(ctx, NfKind::AUSF, std::move(req));
    if (!up.ok) return reply_to(f, msg::kUpstreamUnavailable);
    if (is_error_reply(up.reply.msg_type)) {
      return reply_to(up.reply, msg::kUpstreamUnavailable);
    }
    if (up.reply.msg_type == msg::kAuthReply) {
      {
        std::lock_guard lk(store_mu_);
        registered_ues_.insert(f.ue_id);
      }
      return reply_to(up.reply, msg::kRegistrationAccept);
    }
    return reply_to(up.reply, msg::kRegistrationReject);
  }
  if (m == msg::kAuthRequest && self == NfKind::AUSF) {
    f.hops.push_back(self);
    Frame req = f;
    req.msg_type = msg::kAuthVectorGet;
    auto up = forward(ctx, NfKind::UDM, std::move(req));
    if (!up.ok) return reply_to(f, msg::kUpstreamUnavailable);
    if (is_error_reply(up.reply.msg_type)) {
      return reply_to(up.reply, msg::kUpstreamUnavailable);
    }
    return reply_to(up.reply, up.reply.msg_type == msg::kAuthVectorReply
                                  ? msg::kAuthReply
                                  : msg::kAuthReject);
  }
  if (m == msg::kAuthVectorGet && self == NfKind::UDM) {
    f.hops.push_back(self);
    Frame req = f;
    req.msg_type = msg::kSubscriberGet;
    auto up = forward(ctx, NfKind::UDR, std::move(req));
    if (!up.ok) return reply_to(f, msg::kUpstreamUnavailable);
    if (is_error_reply(up.reply.msg_type)) {
      return reply_to(up.reply, msg::kUpstreamUnavailable);
    }
    return reply_to(up.reply, up.reply.msg_type == msg::kSubscriberReply
                                  ? msg::kAuthVectorReply
                                  : msg::kAuthVectorReject);
  }
  if (m == msg::kSubscriberGet && self == NfKind::UDR) {
    f.hops.push_back(self);
    bool known = false;
    {
      std::lock_guard lk(store_mu_);
      known = subscriber_store_.contains(f.ue_id);
    }
    Frame r = reply_to(
        f, known ? msg::kSubscriberReply : msg::kSubscriberReject);
    r.payload = digest_payload(byte_mix(f.payload, 1));
    return r;
  }

  // PDU session path: UE -> AMF -> SMF -> {UDM, PCF, UPF}.
  if (m == msg::kPduSessionRequest && self == NfKind::AMF) {
    {
      std::lock_guard lk(store_mu_);
      if (!registered_ues_.contains(f.ue_id)) {
        Frame r = reply_to(f, msg::kPduSessionReject);
        r.hops.push_back(self);
        return r;
      }
    }
    f.hops.push_back(self);
    Frame req = f;
    req.msg_type = msg::kCreateSmContext;
    auto up = forward(ctx, NfKind::SMF, std::move(req));
    if (!up.ok) return reply_to(f, msg::kUpstreamUnavailable);
    if (is_error_reply(up.reply.msg_type)) {
      return reply_to(up.reply, msg::kUpstreamUnavailable);
    }
    return reply_to(up.reply, up.reply.msg_type == msg::kCreateSmContextAccept
                                  ? msg::kPduSessionAccept
                                  : msg::kPduSessionReject);
  }
  if (m == msg::kCreateSmContext && self == NfKind::SMF) {
    f.hops.push_back(self);
    Frame sub = f;
    sub.msg_type = msg::kSmSubscriptionGet;
    auto r1 = forward(ctx, NfKind::UDM, std::move(sub));
    if (!r1.ok || is_error_reply(r1.reply.msg_type)) {
      return reply_to(f, msg::kUpstreamUnavailable);
    }
    if (r1.reply.msg_type != msg::kSmSubscriptionReply) {
      return reply_to(r1.reply, msg::kCreateSmContextReject);
    }
    Frame pol = f;
    pol.msg_type = msg::kPolicyGet;
    pol.hops = r1.reply.hops;
    auto r2 = forward(ctx, NfKind::PCF, std::move(pol));
    if (!r2.ok || is_error_reply(r2.reply.msg_type)) {
      return reply_to(f, msg::kUpstreamUnavailable);
    }
    Frame tun = f;
    tun.msg_type = msg::kTunnelSetup;
    tun.hops = r2.reply.hops;
    auto r3 = forward(ctx, NfKind::UPF, std::move(tun));
    if (!r3.ok || is_error_reply(r3.reply.msg_type)) {
      return reply_to(f, msg::kUpstreamUnavailable);
    }
    return reply_to(r3.reply, msg::kCreateSmContextAccept);
  }
  if (m == msg::kSmSubscriptionGet && self == NfKind::UDM) {
    f.hops.push_back(self);
    return reply_to(f, msg::kSmSubscriptionReply);
  }
  if (m == msg::kPolicyGet && self == NfKind::PCF) {
    f.hops.push_back(self);
    return reply_to(f, msg::kPolicyReply);
  }
  if (m == msg::kTunnelSetup && self == NfKind::UPF) {
    f.hops.push_back(self);
    Frame r = reply_to(f, msg::kTunnelSetupAccept);
    r.payload = digest_payload(byte_mix(f.payload, 1));
    return r;
  }

  // NRF registry (startup-time only).
  if (m == msg::kNfRegister && self == NfKind::NRF) {
    try {
      const auto j = nlohmann::json::parse(f.payload.begin(), f.payload.end());
      const auto kind = parse_nf_kind(j.at("kind").get<std::string>());
      const auto port = j.at("port").get<std::uint16_t>();
      if (kind) {
        std::lock_guard lk(store_mu_);
        nrf_registry_[*kind] = port;
        return reply_to(f, msg::kNfRegisterAccept);
      }
    } catch (const std::exception&) {
    }
    return reply_to(f, msg::kError);
  }
  if (m == msg::kNfDiscover && self == NfKind::NRF) {
    try {
      const auto j = nlohmann::json::parse(f.payload.begin(), f.payload.end());
      const auto kind = parse_nf_kind(j.at("kind").get<std::string>());
      std::lock_guard lk(store_mu_);
      if (kind && nrf_registry_.contains(*kind)) {
        Frame r = reply_to(f, msg::kNfDiscoverReply);
        const std::string body =
            nlohmann::json{{"port", nrf_registry_[*kind]}}.dump();
        r.payload.assign(body.begin(), body.end());
        return r;
      }
    } catch (const std::exception&) {
    }
    return reply_to(f, msg::kError);
  }

  // Anything else is a well-formed frame this NF has no role for (e.g.
  // flood traffic aimed at an off-path NF). Work was already done.
  return reply_to(f, msg::kError);
}

Frame NfServer::handle_control(const Frame& f) {
  const std::string& m = f.msg_type;
  if (m == msg::kPing) return reply_to(f, msg::kPong);

  if (m == msg::kProvision) {
    if (cfg_.kind != NfKind::UDR) return reply_to(f, msg::kError);
    try {
      const auto j = nlohmann::json::parse(f.payload.begin(), f.payload.end());
      const auto prefix = j.value("prefix", std::string("ue-"));
      const auto count = j.at("count").get<std::size_t>();
      std::lock_guard lk(store_mu_);
      for (std::size_t i = 0; i < count; ++i) {
        subscriber_store_.insert(pad_ue_id(prefix, i));
      }
      Frame r = reply_to(f, msg::kProvisionAck);
      const std::string body =
          nlohmann::json{{"store_entries", subscriber_store_.size()}}.dump();
      r.payload.assign(body.begin(), body.end());
      return r;
    } catch (const std::exception&) {
      return reply_to(f, msg::kError);
    }
  }

  if (m == msg::kStressStart) {
    try {
      const auto j = nlohmann::json::parse(f.payload.begin(), f.payload.end());
      StressParams p;
      const auto kind = j.at("kind").get<std::string>();
      p.cpu = kind == "CPU" || kind == "CpuMemory";
      p.memory = kind == "Memory" || kind == "CpuMemory";
      if (!p.cpu && !p.memory) return reply_to(f, msg::kError);
      p.cpu_load_pct = j.value("cpu_load_pct", 50.0);
      p.memory_mib = j.value("memory_mib", std::size_t{512});
      p.max_duration_s = j.value("max_duration_s", std::int64_t{0});
      stress_.start(p);
      return reply_to(f, msg::kStressStartAck);
    } catch (const std::exception&) {
      return reply_to(f, msg::kError);
    }
  }
  if (m == msg::kStressStop) {
    stress_.stop();
    return reply_to(f, msg::kStressStopAck);
  }

  if (m == msg::kCaptureStart) {
    try {
      const auto j = nlohmann::json::parse(f.payload.begin(), f.payload.end());
      const auto backend = j.at("backend").get<std::string>();
      if (backend == "inline") {
        tap_.configure_inline(j.at("ring").get<std::string>());
      } else if (backend == "observer") {
        tap_.configure_observer(j.at("port").get<std::uint16_t>(), 1000);
      } else {
        return reply_to(f, msg::kError);
      }
      return reply_to(f, msg::kCaptureStartAck);
    } catch (const std::exception&) {
      return reply_to(f, msg::kError);
    }
  }
  if (m == msg::kCaptureStop) {
    tap_.disable();
    return reply_to(f, msg::kCaptureStopAck);
  }

  if (m == msg::kStatsGet) {
    Frame r = reply_to(f, msg::kStatsReply);
    const std::string body = stats_json();
    r.payload.assign(body.begin(), body.end());
    return r;
  }

  if (m == msg::kShutdown) return reply_to(f, msg::kShutdownAck);
  return reply_to(f, msg::kError);
}

std::string NfServer::stats_json() const {
  const TapStats tap = tap_.stats();
  nlohmann::json j{
      {"kind", std::string(to_string(cfg_.kind))},
      {"net_rx_bytes", net_rx_.load()},
      {"net_tx_bytes", net_tx_.load() + tap_.observer_bytes_sent()},
      {"frames_handled", frames_handled_.load()},
      {"capture",
       {{"frames", tap.frames},
        {"dropped", tap.dropped},
        {"cpu_ns", tap.cpu_ns},
        {"buf_bytes", tap.buf_bytes}}},
      {"stress",
       {{"active", stress_.active()},
        {"busy_ns", stress_.busy_ns()},
        {"touch_passes", stress_.touch_passes()},
        {"stress_bytes", stress_.stress_bytes()}}},
  };
  return j.dump();
}

void NfServer::register_with_nrf() {
  const auto nrf_port = topo_.port_of(NfKind::NRF);
  if (!nrf_port) return;
  if (cfg_.kind == NfKind::NRF) {
    std::lock_guard lk(store_mu_);
    nrf_registry_[cfg_.kind] = cfg_.listen_port;
    return;
  }
  Frame reg;
  reg.msg_type = msg::kNfRegister;
  const std::string body = nlohmann::json{
      {"kind", std::string(to_string(cfg_.kind))},
      {"port", cfg_.listen_port}}.dump();
  reg.payload.assign(body.begin(), body.end());
  for (int attempt = 0; attempt < 20 && !stop_.load(); ++attempt) {
    try {
      Socket s = tcp_connect(*nrf_port, 500);
      const Frame ack = request_reply(s, reg, 1000);
      if (ack.msg_type == msg::kNfRegisterAccept) return;
    } catch (const NetError&) {
    }
    sleep_ms(100);
  }
  std::fprintf(stderr, "[%s] warning: NRF registration failed\n",
               std::string(to_string(cfg_.kind)).c_str());
}

}  // namespace corebench
