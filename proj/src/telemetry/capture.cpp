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

#include "corebench/telemetry/capture.hpp"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "corebench/hex.hpp"
#include "corebench/net.hpp"
#include "corebench/telemetry/tap.hpp"
#include "corebench/time_util.hpp"
#include "corebench/wire.hpp"
#include "json.hpp"

namespace corebench {

std::string_view to_string(CaptureBackend b) {
  return b == CaptureBackend::InlineTap ? "inline" : "observer";
}

double CaptureStats::median_cpu_pct() const {
  if (cpu_pct_samples.empty()) return 0.0;
  std::vector<double> v = cpu_pct_samples;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string CaptureStats::to_json() const {
  return nlohmann::json{
      {"backend", std::string(to_string(backend))},
      {"cpu_pct_samples", cpu_pct_samples},
      {"mem_bytes_samples", mem_bytes_samples},
      {"median_cpu_pct", median_cpu_pct()},
      {"frames_captured", frames_captured},
      {"frames_dropped", frames_dropped},
  }
      .dump(2);
}

namespace {

struct NfTapTotals {
  std::uint64_t frames = 0;
  std::uint64_t dropped = 0;
  std::int64_t cpu_ns = 0;
  std::uint64_t buf_bytes = 0;
};

std::optional<NfTapTotals> fetch_tap_stats(std::uint16_t port) {
  try {
    Socket s = tcp_connect(port, 500);
    Frame f;
    f.msg_type = msg::kStatsGet;
    const Frame r = request_reply(s, f, 1000);
    if (r.msg_type != msg::kStatsReply) return std::nullopt;
    const auto j = nlohmann::json::parse(r.payload.begin(), r.payload.end());
    const auto& c = j.at("capture");
    NfTapTotals t;
    t.frames = c.at("frames").get<std::uint64_t>();
    t.dropped = c.at("dropped").get<std::uint64_t>();
    t.cpu_ns = c.at("cpu_ns").get<std::int64_t>();
    t.buf_bytes = c.at("buf_bytes").get<std::uint64_t>();
    return t;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool send_capture_control(std::uint16_t port, const char* type,
                          const std::string& body, const char* expect) {
  try {
    Socket s = tcp_connect(port, 1000);
    Frame f;
    f.msg_type = type;
    f.payload.assign(body.begin(), body.end());
    return request_reply(s, f, 2000).msg_type == expect;
  } catch (const NetError&) {
    return false;
  }
}

std::string peer_name(std::uint8_t id) {
  if (id == kUePeerId) return "UE";
  if (id < kNfCount) return std::string(to_string(static_cast<NfKind>(id)));
  return "?";
}

}  // namespace

struct CaptureSession::Impl {
  CaptureBackend backend = CaptureBackend::InlineTap;
  std::vector<CaptureEndpoint> nfs;
  CaptureOptions opts;
  std::map<NfKind, NfTapTotals> baseline;

  std::optional<ShmRing> ring;
  std::optional<TcpListener> listener;
  std::vector<Socket> conns;
  std::vector<MirrorStreamParser> parsers;

  std::thread collector;
  std::atomic<bool> stop_flag{false};

  std::mutex mu;
  std::vector<MirrorRecord> records;
  std::vector<double> cpu_samples;
  std::vector<std::uint64_t> mem_samples;

  void collector_loop();
  void drain_once(std::int64_t& self_cpu_ns);
};

void CaptureSession::Impl::drain_once(std::int64_t& self_cpu_ns) {
  const std::int64_t c0 = thread_cpu_ns();
  if (backend == CaptureBackend::InlineTap) {
    auto batch = ring->pop_all();
    if (!batch.empty()) {
      std::lock_guard lk(mu);
      for (auto& r : batch) records.push_back(std::move(r));
    }
  } else {
    // Accept pending tap connections from NFs.
    for (;;) {
      Socket c = listener->accept_conn(0);
      if (!c.valid()) break;
      conns.push_back(std::move(c));
      parsers.emplace_back();
    }
    std::uint8_t buf[65536];
    for (std::size_t i = 0; i < conns.size(); ++i) {
      if (!conns[i].valid()) continue;
      for (;;) {
        pollfd p{conns[i].fd(), POLLIN, 0};
        if (poll(&p, 1, 0) <= 0) break;
        const ssize_t n = ::recv(conns[i].fd(), buf, sizeof(buf), MSG_DONTWAIT);
        if (n <= 0) {
          if (n == 0) conns[i].close_fd();
          break;
        }
        // Re-parse: decode every record the NF forwarded.
        parsers[i].feed(std::span<const std::uint8_t>(buf, static_cast<std::size_t>(n)));
        auto batch = parsers[i].take();
        if (!batch.empty()) {
          std::lock_guard lk(mu);
          for (auto& r : batch) records.push_back(std::move(r));
        }
      }
    }
  }
  self_cpu_ns += thread_cpu_ns() - c0;
}

void CaptureSession::Impl::collector_loop() {
  std::int64_t self_cpu_ns = 0;
  std::int64_t prev_self_cpu = 0;
  std::int64_t prev_nf_cpu = 0;
  std::int64_t prev_ts = now_mono_ns();
  std::int64_t next_sample = prev_ts + opts.sample_interval_ms * 1'000'000LL;
  bool have_nf_baseline = false;

  while (!stop_flag.load(std::memory_order_relaxed)) {
    drain_once(self_cpu_ns);
    const std::int64_t ts = now_mono_ns();
    if (ts >= next_sample) {
      std::int64_t nf_cpu = 0;
      std::uint64_t nf_buf = 0;
      bool all_ok = true;
      for (const auto& ep : nfs) {
        const auto t = fetch_tap_stats(ep.port);
        if (!t) {
          all_ok = false;
          continue;
        }
        nf_cpu += t->cpu_ns - baseline[ep.kind].cpu_ns;
        nf_buf += t->buf_bytes;
      }
      const double dt_s = static_cast<double>(ts - prev_ts) / 1e9;
      if (dt_s > 0.0 && all_ok && have_nf_baseline) {
        const double cpu_pct =
            100.0 *
            (static_cast<double>(self_cpu_ns - prev_self_cpu) +
             static_cast<double>(nf_cpu - prev_nf_cpu)) /
            1e9 / dt_s;
        std::uint64_t mem = nf_buf;
        if (backend == CaptureBackend::InlineTap) mem += ring->capacity();
        std::lock_guard lk(mu);
        cpu_samples.push_back(cpu_pct);
        mem_samples.push_back(mem);
      }
      if (all_ok) {
        have_nf_baseline = true;
        prev_nf_cpu = nf_cpu;
        prev_self_cpu = self_cpu_ns;
        prev_ts = ts;
      }
      next_sample += opts.sample_interval_ms * 1'000'000LL;
      if (next_sample < ts) next_sample = ts + opts.sample_interval_ms * 1'000'000LL;
    }
    sleep_ms(10);
  }
  // Final drain after CAPTURE_STOP acked.
  for (int i = 0; i < 20; ++i) {
    drain_once(self_cpu_ns);
    sleep_ms(10);
  }
}

CaptureSession::CaptureSession() = default;
CaptureSession::~CaptureSession() {
  if (impl_ && impl_->collector.joinable()) {
    impl_->stop_flag.store(true);
    impl_->collector.join();
  }
}
CaptureSession::CaptureSession(CaptureSession&&) noexcept = default;
CaptureSession& CaptureSession::operator=(CaptureSession&&) noexcept = default;

CaptureSession CaptureSession::start(CaptureBackend backend,
                                     std::vector<CaptureEndpoint> nfs,
                                     const CaptureOptions& opts) {
  CaptureSession session;
  session.impl_ = std::make_unique<Impl>();
  Impl& im = *session.impl_;
  im.backend = backend;
  im.nfs = std::move(nfs);
  im.opts = opts;

  std::string start_body;
  if (backend == CaptureBackend::InlineTap) {
    std::string name = opts.ring_name;
    if (name.empty()) {
      static std::atomic<int> counter{0};
      name = "/corebench-tap-" + std::to_string(getpid()) + "-" +
             std::to_string(counter.fetch_add(1));
    }
    im.ring = ShmRing::create(name, opts.ring_bytes);
    start_body = nlohmann::json{{"backend", "inline"}, {"ring", name}}.dump();
  } else {
    if (opts.observer_port == 0) {
      throw std::invalid_argument("capture: observer_port required");
    }
    im.listener = TcpListener(opts.observer_port);
    start_body = nlohmann::json{{"backend", "observer"},
                                {"port", opts.observer_port}}.dump();
  }

  // Baselines make a second session against the same NFs start from zero.
  for (const auto& ep : im.nfs) {
    if (const auto t = fetch_tap_stats(ep.port)) im.baseline[ep.kind] = *t;
  }
  im.collector = std::thread([p = session.impl_.get()] { p->collector_loop(); });

  for (const auto& ep : im.nfs) {
    if (!send_capture_control(ep.port, msg::kCaptureStart, start_body,
                              msg::kCaptureStartAck)) {
      im.stop_flag.store(true);
      im.collector.join();
      throw std::runtime_error("capture: CAPTURE_START rejected by " +
                               std::string(to_string(ep.kind)));
    }
  }
  return session;
}

CaptureResult CaptureSession::stop() {
  Impl& im = *impl_;
  CaptureResult out;
  out.stats.backend = im.backend;

  for (const auto& ep : im.nfs) {
    const auto t = fetch_tap_stats(ep.port);  // totals before disable
    if (t) {
      out.stats.frames_dropped += t->dropped - im.baseline[ep.kind].dropped;
    }
    send_capture_control(ep.port, msg::kCaptureStop, "{}",
                         msg::kCaptureStopAck);
  }
  im.stop_flag.store(true);
  if (im.collector.joinable()) im.collector.join();

  std::lock_guard lk(im.mu);
  std::sort(im.records.begin(), im.records.end(),
            [](const MirrorRecord& a, const MirrorRecord& b) {
              return a.ts_ns < b.ts_ns;
            });
  out.records.reserve(im.records.size());
  for (const auto& r : im.records) {
    PacketRecord pr;
    pr.ts_ns = r.ts_ns;
    pr.src_nf = peer_name(r.src);
    pr.dst_nf = peer_name(r.dst);
    pr.length_bytes = static_cast<std::uint32_t>(r.body.size());
    pr.payload_hex = hex_encode(r.body);
    out.records.push_back(std::move(pr));
  }
  out.stats.frames_captured = out.records.size();
  out.stats.cpu_pct_samples = im.cpu_samples;
  out.stats.mem_bytes_samples = im.mem_samples;
  return out;
}

void write_packet_feed_jsonl(const std::string& path,
                             const std::vector<PacketRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : records) {
    out << nlohmann::json{{"ts_ns", r.ts_ns},
                          {"src_nf", r.src_nf},
                          {"dst_nf", r.dst_nf},
                          {"length_bytes", r.length_bytes},
                          {"payload_hex", r.payload_hex}}
               .dump()
        << "\n";
  }
}

std::vector<PacketRecord> read_packet_feed_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PacketRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    PacketRecord r;
    r.ts_ns = j.at("ts_ns").get<std::int64_t>();
    r.src_nf = j.at("src_nf").get<std::string>();
    r.dst_nf = j.at("dst_nf").get<std::string>();
    r.length_bytes = j.at("length_bytes").get<std::uint32_t>();
    r.payload_hex = j.at("payload_hex").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace corebench
